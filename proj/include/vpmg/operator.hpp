#pragma once

/// \file operator.hpp
/// Matrix-free interior penalty Laplacian on a Cartesian level.
///
/// DoFs use cell-wise lexicographic numbering: the global index of a DoF is
/// cell_index * (k+1)^dim + local index, where the local index runs
/// lexicographically (x fastest) over the tensor-product basis of the cell.
/// On a Cartesian mesh every cell and face contribution is a Kronecker
/// product of 1D blocks, so the action is evaluated by sum factorization.

#include "vpmg/basis.hpp"
#include "vpmg/mesh.hpp"
#include "vpmg/tensor.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace vpmg {

template <typename Number>
struct DoFVector {
  int level = 0;
  std::vector<Number> values;

  DoFVector() = default;
  DoFVector(int l, std::size_t n) : level(l), values(n, Number(0)) {}
  std::size_t size() const { return values.size(); }
};

/// A cell matrix as a sum of Kronecker products,
///   2D: L_1 x M_0 + M_1 x L_0,
///   3D: L_2 x M_1 x M_0 + M_2 x L_1 x M_0 + M_2 x M_1 x L_0.
struct KroneckerCellOperator {
  int dim = 2;
  std::array<Eigen::MatrixXd, 3> mass;
  std::array<Eigen::MatrixXd, 3> stiffness;

  int size() const;
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
};

/// Cell volume term of the Laplacian on a cell of width h.
KroneckerCellOperator cell_operator(int degree, int dim, double h,
                                    BasisKind kind = BasisKind::Lagrange);

/// 1D blocks of one level in working precision.
template <typename Number>
struct LevelBlocks {
  int level = 0;
  double h = 0.0;
  DenseMatrix<Number> mass;
  DenseMatrix<Number> minus_plus;  // rows: lower cell, cols: upper cell
  DenseMatrix<Number> plus_minus;  // rows: upper cell, cols: lower cell
  DenseMatrix<Number> minus_minus;
  DenseMatrix<Number> plus_plus;
  /// Cell diagonal block (volume plus own face halves), indexed by
  /// at_lower_boundary + 2 * at_upper_boundary.
  std::array<DenseMatrix<Number>, 4> cell_self;
  /// Two-cell strip matrix including the face between the cells and domain
  /// boundary faces, but no exterior interior faces; same indexing.
  std::array<DenseMatrix<Number>, 4> strip;
  /// Block-diagonal two-cell mass.
  DenseMatrix<Number> strip_mass;
};

template <typename Number>
class GlobalOperator {
 public:
  GlobalOperator(const MeshHierarchy& mesh, const Basis1D& basis,
                 double penalty_factor = 1.0);

  const MeshHierarchy& mesh() const { return *mesh_; }
  const Basis1D& basis() const { return basis_; }
  int dim() const { return mesh_->dim(); }
  int degree() const { return basis_.degree(); }
  double penalty_factor() const { return penalty_factor_; }
  int dofs_per_cell() const { return dofs_per_cell_; }
  std::size_t n_dofs(int level) const {
    return mesh_->n_cells(level) * dofs_per_cell_;
  }
  const LevelBlocks<Number>& blocks(int level) const { return blocks_.at(level); }

  /// dst = A_level src, cell-wise loop.
  void vmult(int level, std::span<Number> dst, std::span<const Number> src) const;

  /// dst = A_level src, loop over a non-overlapping patch tiling with
  /// face-wise integration of the faces between tiles.
  void vmult_patchwise(int level, std::span<Number> dst,
                       std::span<const Number> src) const;

  DoFVector<Number> apply(const DoFVector<Number>& x) const;
  DoFVector<Number> apply_patchwise(const DoFVector<Number>& x) const;

  /// Rows of one cell: out = sum over the cell's own and neighbor
  /// contributions. `read(cell)` returns a pointer to the cell's values.
  template <typename Reader>
  void apply_cell(int level, std::size_t cell, Reader&& read, Number* out,
                  TensorScratch<Number>& scratch) const;

 private:
  void check(int level, std::size_t n_dst, std::size_t n_src) const;

  const MeshHierarchy* mesh_;
  Basis1D basis_;
  double penalty_factor_;
  int dofs_per_cell_;
  std::vector<LevelBlocks<Number>> blocks_;
};

/// Dense global matrix of a level by quadrature over cells and faces with
/// vector-valued jumps. Independent of the Kronecker path; test oracle.
/// Rejects systems with more than 4e8 entries.
Eigen::MatrixXd assemble(const MeshHierarchy& mesh, int level,
                         const Basis1D& basis, double penalty_factor = 1.0);

template <typename Number>
Eigen::MatrixXd assemble(const GlobalOperator<Number>& op, int level) {
  return assemble(op.mesh(), level, op.basis(), op.penalty_factor());
}

/// Load vector for f == 1: b_i = int phi_i.
std::vector<double> assemble_rhs_constant(const MeshHierarchy& mesh, int level,
                                          const Basis1D& basis);

/// Coefficients of a function given pointwise (and via its x-derivative
/// hooks for Hermite functionals) on every cell. Only separable functions
/// f(x) = prod_d g(x_d) are supported.
template <typename G, typename DG>
std::vector<double> interpolate_separable(const MeshHierarchy& mesh, int level,
                                          const Basis1D& basis, G&& g, DG&& dg);

// ---------------------------------------------------------------------------

template <typename Number>
template <typename Reader>
void GlobalOperator<Number>::apply_cell(int level, std::size_t cell,
                                        Reader&& read, Number* out,
                                        TensorScratch<Number>& scratch) const {
  const int dim = mesh_->dim();
  const LevelBlocks<Number>& b = blocks_[level];
  const Number* self = read(cell);
  std::array<const DenseMatrix<Number>*, 3> factors{&b.mass, &b.mass, &b.mass};
  bool first = true;
  for (int d = 0; d < dim; ++d) {
    const auto lower = mesh_->neighbor(level, cell, d, 0);
    const auto upper = mesh_->neighbor(level, cell, d, 1);
    const int variant = (lower ? 0 : 1) + (upper ? 0 : 2);
    factors = {&b.mass, &b.mass, &b.mass};
    factors[d] = &b.cell_self[variant];
    apply_kronecker<Number>(factors, dim, self, out, !first, scratch);
    first = false;
    if (lower) {
      factors[d] = &b.plus_minus;
      apply_kronecker<Number>(factors, dim, read(*lower), out, true, scratch);
    }
    if (upper) {
      factors[d] = &b.minus_plus;
      apply_kronecker<Number>(factors, dim, read(*upper), out, true, scratch);
    }
  }
}

template <typename G, typename DG>
std::vector<double> interpolate_separable(const MeshHierarchy& mesh, int level,
                                          const Basis1D& basis, G&& g, DG&& dg) {
  const int dim = mesh.dim();
  const int n1 = basis.size();
  const double h = mesh.cell_size(level);
  std::size_t dpc = 1;
  for (int d = 0; d < dim; ++d) dpc *= n1;
  std::vector<double> x(mesh.n_cells(level) * dpc);
  for (std::size_t c = 0; c < mesh.n_cells(level); ++c) {
    const Coords cc = mesh.coordinates(level, c);
    std::array<Eigen::VectorXd, 3> coef;
    for (int d = 0; d < dim; ++d) {
      const double x0 = cc[d] * h;
      // reference derivative = h * physical derivative
      coef[d] = basis.interpolate([&](double t) { return g(x0 + h * t); },
                                  [&](double t) { return h * dg(x0 + h * t); });
    }
    for (std::size_t l = 0; l < dpc; ++l) {
      std::size_t rest = l;
      double v = 1.0;
      for (int d = 0; d < dim; ++d) {
        v *= coef[d][rest % n1];
        rest /= n1;
      }
      x[c * dpc + l] = v;
    }
  }
  return x;
}

}  // namespace vpmg
