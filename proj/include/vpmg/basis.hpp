#pragma once

/// \file basis.hpp
/// One-dimensional polynomial bases on [0,1], quadrature rules and the 1D
/// mass / interior-penalty matrices from which all tensor-product operators
/// are built.

#include <Eigen/Dense>

#include <vector>

namespace vpmg {

struct Quadrature1D {
  std::vector<double> points;
  std::vector<double> weights;
};

/// Gauss-Lobatto points on [0,1], endpoints included. Requires n >= 2.
std::vector<double> gauss_lobatto_nodes(int n);

/// n-point Gauss-Legendre rule on [0,1]; weights sum to one.
Quadrature1D gauss_quadrature(int n);

enum class BasisKind { Lagrange, Hermite };

/// A degree of freedom: value (derivative = 0) or first derivative of a
/// function at a point of the reference interval.
struct NodalFunctional {
  double point = 0.0;
  int derivative = 0;
};

/// Polynomial basis of P_k on [0,1] that is dual to a set of k+1 nodal
/// functionals.
///
/// Lagrange: point values at the Gauss-Lobatto nodes.
/// Hermite (k >= 3): v(0), v'(0), v at the k-3 interior Gauss points,
/// v'(1), v(1) -- in that order, so that functions 0,1 and k-1,k carry the
/// endpoint data and all others vanish with their derivative at both ends.
class Basis1D {
 public:
  Basis1D(BasisKind kind, int degree, std::vector<NodalFunctional> functionals);

  BasisKind kind() const { return kind_; }
  int degree() const { return degree_; }
  int size() const { return degree_ + 1; }
  const std::vector<NodalFunctional>& functionals() const { return functionals_; }

  double value(int i, double x) const;
  double derivative(int i, double x) const;

  /// Coefficients of an arbitrary function given by its value and
  /// derivative callbacks.
  template <typename F, typename DF>
  Eigen::VectorXd interpolate(F&& f, DF&& df) const {
    Eigen::VectorXd c(size());
    for (int i = 0; i < size(); ++i)
      c[i] = functionals_[i].derivative == 0 ? f(functionals_[i].point)
                                             : df(functionals_[i].point);
    return c;
  }

 private:
  BasisKind kind_;
  int degree_;
  std::vector<NodalFunctional> functionals_;
  // phi_i(x) = sum_m coeffs_(m, i) P_m(2x - 1)
  Eigen::MatrixXd coeffs_;
};

Basis1D make_basis(BasisKind kind, int degree);

enum class MatrixRole { Mass, Stiffness };

struct Matrix1D {
  Eigen::MatrixXd values;
  MatrixRole role = MatrixRole::Mass;
  double h = 1.0;
};

/// M_ij = h * int_0^1 phi_i phi_j.
Matrix1D assemble_mass_1d(const Basis1D& basis, double h);

/// k(k+1)(1/h_minus + 1/h_plus).
double penalty_parameter(int degree, double h_minus, double h_plus);

/// Cell and face blocks of the 1D interior penalty form on cells of width h.
///
/// Interior faces couple a cell to its left ("minus") and right ("plus")
/// neighbor; `minus_plus` has rows in the minus cell and columns in the plus
/// cell. Boundary blocks realize the weak Dirichlet (Nitsche) terms on the
/// lower and upper end of a cell.
struct SipgBlocks1D {
  Eigen::MatrixXd volume;
  Eigen::MatrixXd minus_minus;
  Eigen::MatrixXd minus_plus;
  Eigen::MatrixXd plus_minus;
  Eigen::MatrixXd plus_plus;
  Eigen::MatrixXd boundary_lower;
  Eigen::MatrixXd boundary_upper;
  Eigen::MatrixXd mass;
};

/// `penalty_factor` scales gamma; 1 gives the standard method.
SipgBlocks1D sipg_blocks(const Basis1D& basis, double h,
                         double penalty_factor = 1.0);

/// How the outer ends of a 1D cell strip are treated.
///   WeakDirichlet    boundary face with Nitsche terms
///   None             no face term
///   InteriorNeighbor the strip's own half of an interior face whose other
///                    side lies outside the strip (restriction of the global
///                    matrix to the strip)
enum class FaceTreatment { WeakDirichlet, None, InteriorNeighbor };

enum class BoundaryCondition { WeakDirichlet, None };

/// 1D interior penalty matrix on `ncells` equal cells of width h.
Matrix1D assemble_sipg_1d(const Basis1D& basis, int ncells, double h,
                          BoundaryCondition bc);

Matrix1D assemble_sipg_1d(const Basis1D& basis, int ncells, double h,
                          FaceTreatment lower, FaceTreatment upper,
                          double penalty_factor = 1.0);

/// Block-diagonal 1D mass matrix on `ncells` cells.
Matrix1D assemble_mass_1d(const Basis1D& basis, int ncells, double h);

}  // namespace vpmg
