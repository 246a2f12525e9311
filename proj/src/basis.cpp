#include "vpmg/basis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace vpmg {

namespace {

// Legendre polynomials on [-1,1] and their first derivatives, degrees 0..n-1.
void legendre(int n, double t, std::vector<double>& p, std::vector<double>& dp) {
  p.assign(n, 0.0);
  dp.assign(n, 0.0);
  if (n == 0) return;
  p[0] = 1.0;
  if (n == 1) return;
  p[1] = t;
  dp[1] = 1.0;
  for (int m = 1; m + 1 < n; ++m) {
    p[m + 1] = ((2 * m + 1) * t * p[m] - m * p[m - 1]) / (m + 1);
    dp[m + 1] = dp[m - 1] + (2 * m + 1) * p[m];
  }
}

}  // namespace

Quadrature1D gauss_quadrature(int n) {
  if (n < 1) throw std::invalid_argument("Gauss rule needs at least one point");
  Quadrature1D q;
  q.points.resize(n);
  q.weights.resize(n);
  std::vector<double> p, dp;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      legendre(n + 1, t, p, dp);
      const double step = p[n] / dp[n];
      t -= step;
      if (std::abs(step) < 1e-16) break;
    }
    legendre(n + 1, t, p, dp);
    const double w = 2.0 / ((1.0 - t * t) * dp[n] * dp[n]);
    // t is the i-th largest root; map to [0,1] and mirror
    q.points[n - 1 - i] = 0.5 * (1.0 + t);
    q.points[i] = 0.5 * (1.0 - t);
    q.weights[n - 1 - i] = 0.5 * w;
    q.weights[i] = 0.5 * w;
  }
  if (n % 2 == 1) q.points[n / 2] = 0.5;
  return q;
}

std::vector<double> gauss_lobatto_nodes(int n) {
  if (n < 2)
    throw std::invalid_argument("Gauss-Lobatto rule needs at least two points");
  std::vector<double> nodes(n);
  nodes.front() = 0.0;
  nodes.back() = 1.0;
  const int m = n - 1;  // interior nodes are the roots of P'_m
  std::vector<double> p, dp;
  for (int i = 1; i < n - 1; ++i) {
    double t = -std::cos(std::numbers::pi * i / m);
    for (int it = 0; it < 100; ++it) {
      legendre(m + 1, t, p, dp);
      const double d2 = (2.0 * t * dp[m] - m * (m + 1) * p[m]) / (1.0 - t * t);
      const double step = dp[m] / d2;
      t -= step;
      if (std::abs(step) < 1e-16) break;
    }
    nodes[i] = 0.5 * (1.0 + t);
  }
  // exact symmetry about 1/2
  for (int i = 0; i < n / 2; ++i) {
    const double s = 0.5 * (nodes[i] + 1.0 - nodes[n - 1 - i]);
    nodes[i] = s;
    nodes[n - 1 - i] = 1.0 - s;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.5;
  return nodes;
}

Basis1D::Basis1D(BasisKind kind, int degree,
                 std::vector<NodalFunctional> functionals)
    : kind_(kind), degree_(degree), functionals_(std::move(functionals)) {
  const int n = degree + 1;
  if (static_cast<int>(functionals_.size()) != n)
    throw std::invalid_argument("basis needs degree+1 functionals");
  Eigen::MatrixXd f(n, n);
  std::vector<double> p, dp;
  for (int i = 0; i < n; ++i) {
    legendre(n, 2.0 * functionals_[i].point - 1.0, p, dp);
    for (int m = 0; m < n; ++m)
      f(i, m) = functionals_[i].derivative == 0 ? p[m] : 2.0 * dp[m];
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(f);
  if (!lu.isInvertible())
    throw std::invalid_argument("nodal functionals are not unisolvent");
  coeffs_ = lu.inverse();
}

double Basis1D::value(int i, double x) const {
  std::vector<double> p, dp;
  legendre(size(), 2.0 * x - 1.0, p, dp);
  double v = 0.0;
  for (int m = 0; m < size(); ++m) v += coeffs_(m, i) * p[m];
  return v;
}

double Basis1D::derivative(int i, double x) const {
  std::vector<double> p, dp;
  legendre(size(), 2.0 * x - 1.0, p, dp);
  double v = 0.0;
  for (int m = 0; m < size(); ++m) v += coeffs_(m, i) * 2.0 * dp[m];
  return v;
}

Basis1D make_basis(BasisKind kind, int degree) {
  std::vector<NodalFunctional> functionals;
  if (kind == BasisKind::Lagrange) {
    if (degree < 1)
      throw std::invalid_argument("Lagrange basis needs degree >= 1");
    for (double x : gauss_lobatto_nodes(degree + 1))
      functionals.push_back({x, 0});
  } else {
    if (degree < 3)
      throw std::invalid_argument(
          "Hermite basis needs degree >= 3, got " + std::to_string(degree));
    functionals.push_back({0.0, 0});
    functionals.push_back({0.0, 1});
    if (degree > 3)
      for (double x : gauss_quadrature(degree - 3).points)
        functionals.push_back({x, 0});
    functionals.push_back({1.0, 1});
    functionals.push_back({1.0, 0});
  }
  return Basis1D(kind, degree, std::move(functionals));
}

double penalty_parameter(int degree, double h_minus, double h_plus) {
  return degree * (degree + 1) * (1.0 / h_minus + 1.0 / h_plus);
}

Matrix1D assemble_mass_1d(const Basis1D& basis, double h) {
  const int n = basis.size();
  const Quadrature1D q = gauss_quadrature(n);
  Matrix1D m{Eigen::MatrixXd::Zero(n, n), MatrixRole::Mass, h};
  for (std::size_t p = 0; p < q.points.size(); ++p)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        m.values(i, j) += h * q.weights[p] * basis.value(i, q.points[p]) *
                          basis.value(j, q.points[p]);
  return m;
}

SipgBlocks1D sipg_blocks(const Basis1D& basis, double h, double penalty_factor) {
  const int n = basis.size();
  const int k = basis.degree();
  const Quadrature1D q = gauss_quadrature(n);

  SipgBlocks1D b;
  b.mass = assemble_mass_1d(basis, h).values;
  b.volume = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t p = 0; p < q.points.size(); ++p)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        b.volume(i, j) += q.weights[p] * basis.derivative(i, q.points[p]) *
                          basis.derivative(j, q.points[p]) / h;

  Eigen::VectorXd v0(n), v1(n), d0(n), d1(n);
  for (int i = 0; i < n; ++i) {
    v0[i] = basis.value(i, 0.0);
    v1[i] = basis.value(i, 1.0);
    d0[i] = basis.derivative(i, 0.0) / h;
    d1[i] = basis.derivative(i, 1.0) / h;
  }
  const double gamma = penalty_factor * penalty_parameter(k, h, h);

  // Interior face: minus cell ends at its upper end (trace v1), plus cell
  // starts at its lower end (trace v0); jump = u_minus - u_plus.
  b.minus_minus = gamma * v1 * v1.transpose() - 0.5 * v1 * d1.transpose() -
                  0.5 * d1 * v1.transpose();
  b.minus_plus = -gamma * v1 * v0.transpose() - 0.5 * v1 * d0.transpose() +
                 0.5 * d1 * v0.transpose();
  b.plus_minus = b.minus_plus.transpose();
  b.plus_plus = gamma * v0 * v0.transpose() + 0.5 * v0 * d0.transpose() +
                0.5 * d0 * v0.transpose();

  // Boundary faces: {u} = u, [[u]] = u n.
  b.boundary_lower = gamma * v0 * v0.transpose() + v0 * d0.transpose() +
                     d0 * v0.transpose();
  b.boundary_upper = gamma * v1 * v1.transpose() - v1 * d1.transpose() -
                     d1 * v1.transpose();
  return b;
}

Matrix1D assemble_sipg_1d(const Basis1D& basis, int ncells, double h,
                          FaceTreatment lower, FaceTreatment upper,
                          double penalty_factor) {
  if (ncells < 1)
    throw std::invalid_argument("1D interior penalty matrix needs ncells >= 1");
  if (!(h > 0.0)) throw std::invalid_argument("cell width must be positive");
  const int n = basis.size();
  const SipgBlocks1D b = sipg_blocks(basis, h, penalty_factor);
  Matrix1D a{Eigen::MatrixXd::Zero(ncells * n, ncells * n),
             MatrixRole::Stiffness, h};
  auto block = [&](int row_cell, int col_cell) {
    return a.values.block(row_cell * n, col_cell * n, n, n);
  };
  for (int c = 0; c < ncells; ++c) block(c, c) += b.volume;
  for (int f = 1; f < ncells; ++f) {
    block(f - 1, f - 1) += b.minus_minus;
    block(f - 1, f) += b.minus_plus;
    block(f, f - 1) += b.plus_minus;
    block(f, f) += b.plus_plus;
  }
  if (lower == FaceTreatment::WeakDirichlet) block(0, 0) += b.boundary_lower;
  if (lower == FaceTreatment::InteriorNeighbor) block(0, 0) += b.plus_plus;
  if (upper == FaceTreatment::WeakDirichlet)
    block(ncells - 1, ncells - 1) += b.boundary_upper;
  if (upper == FaceTreatment::InteriorNeighbor)
    block(ncells - 1, ncells - 1) += b.minus_minus;
  return a;
}

Matrix1D assemble_sipg_1d(const Basis1D& basis, int ncells, double h,
                          BoundaryCondition bc) {
  const FaceTreatment t = bc == BoundaryCondition::WeakDirichlet
                              ? FaceTreatment::WeakDirichlet
                              : FaceTreatment::None;
  return assemble_sipg_1d(basis, ncells, h, t, t);
}

Matrix1D assemble_mass_1d(const Basis1D& basis, int ncells, double h) {
  const int n = basis.size();
  const Eigen::MatrixXd cell = assemble_mass_1d(basis, h).values;
  Matrix1D m{Eigen::MatrixXd::Zero(ncells * n, ncells * n), MatrixRole::Mass, h};
  for (int c = 0; c < ncells; ++c) m.values.block(c * n, c * n, n, n) = cell;
  return m;
}

}  // namespace vpmg
