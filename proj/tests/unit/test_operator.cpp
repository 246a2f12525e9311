#include "doctest.h"

#include "vpmg/multigrid.hpp"
#include "vpmg/operator.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <numeric>
#include <random>

using namespace vpmg;

namespace {

std::vector<double> random_vector(std::size_t n, unsigned seed) {
  std::mt19937 g(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> v(n);
  for (auto& x : v) x = u(g);
  return v;
}

double rel_err(const std::vector<double>& a, const Eigen::VectorXd& b) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("matrix-free apply matches the assembled matrix") {
  for (int dim : {2, 3})
    for (int k : {1, 2, 3})
      for (int level : {0, 1}) {
        CAPTURE(dim);
        CAPTURE(k);
        CAPTURE(level);
        const MeshHierarchy mesh(dim, level);
        const GlobalOperator<double> op(mesh, make_basis(BasisKind::Lagrange, k));
        const Eigen::MatrixXd a = assemble(op, level);
        const std::size_t n = op.n_dofs(level);
        REQUIRE(static_cast<std::size_t>(a.rows()) == n);
        double worst = 0;
        for (unsigned s = 0; s < 20; ++s) {
          const auto x = random_vector(n, s);
          std::vector<double> y(n);
          op.vmult(level, y, x);
          worst = std::max(worst, rel_err(y, a * Eigen::Map<const Eigen::VectorXd>(x.data(), n)));
        }
        CHECK(worst <= 1e-12);
      }
}

TEST_CASE("patch-wise and cell-wise loops agree") {
  for (int dim : {2, 3})
    for (int k : {1, 2, 3})
      for (int level : {0, 1}) {
        const MeshHierarchy mesh(dim, level);
        const GlobalOperator<double> op(mesh, make_basis(BasisKind::Lagrange, k));
        const std::size_t n = op.n_dofs(level);
        const auto x = random_vector(n, 7);
        std::vector<double> y1(n), y2(n);
        op.vmult(level, y1, x);
        op.vmult_patchwise(level, y2, x);
        CHECK(rel_err(y2, Eigen::Map<const Eigen::VectorXd>(y1.data(), n)) <= 1e-13);
      }
}

TEST_CASE("hermite operator matches its assembled matrix") {
  const MeshHierarchy mesh(2, 1);
  const GlobalOperator<double> op(mesh, make_basis(BasisKind::Hermite, 3));
  const Eigen::MatrixXd a = assemble(op, 1);
  const auto x = random_vector(op.n_dofs(1), 3);
  std::vector<double> y(x.size());
  op.vmult(1, y, x);
  CHECK(rel_err(y, a * Eigen::Map<const Eigen::VectorXd>(x.data(), x.size())) <= 1e-12);
}

TEST_CASE("assembled matrix is symmetric positive definite") {
  const MeshHierarchy mesh(2, 1);
  const Eigen::MatrixXd a = assemble(mesh, 1, make_basis(BasisKind::Lagrange, 2));
  CHECK((a - a.transpose()).norm() <= 1e-12 * a.norm());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  CHECK(es.eigenvalues().minCoeff() > 0);
}

TEST_CASE("kronecker cell operator matches a dense kronecker sum") {
  const auto c = cell_operator(2, 2, 0.5);
  Eigen::MatrixXd dense = Eigen::kroneckerProduct(c.stiffness[1], c.mass[0]);
  dense += Eigen::kroneckerProduct(c.mass[1], c.stiffness[0]);
  const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(9, -1, 2);
  CHECK((c.apply(x) - dense * x).norm() <= 1e-13 * (dense * x).norm());
}

TEST_CASE("coarse operator with doubled penalty is the galerkin product") {
  // The fine penalty scales like 1/h, so P^T A_fine P sees twice the coarse
  // penalty on every coarse face.
  const MeshHierarchy mesh(2, 1);
  const Basis1D basis = make_basis(BasisKind::Lagrange, 2);
  const Eigen::MatrixXd af = assemble(mesh, 1, basis, 1.0);
  const Eigen::MatrixXd ac = assemble(mesh, 0, basis, 2.0);
  const Transfer<double> t(mesh, basis);
  const std::size_t nc = ac.rows(), nf = af.rows();
  Eigen::MatrixXd p(nf, nc);
  for (std::size_t j = 0; j < nc; ++j) {
    std::vector<double> e(nc, 0.0), f(nf);
    e[j] = 1.0;
    t.prolongate(0, e, f);
    for (std::size_t i = 0; i < nf; ++i) p(i, j) = f[i];
  }
  CHECK((p.transpose() * af * p - ac).norm() <= 1e-11 * ac.norm());
}

TEST_CASE("load vector of f = 1 sums to the domain volume") {
  for (int dim : {2, 3}) {
    const MeshHierarchy mesh(dim, 1);
    const auto b = assemble_rhs_constant(mesh, 1, make_basis(BasisKind::Lagrange, 3));
    CHECK(std::accumulate(b.begin(), b.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("single precision operator tracks double") {
  const MeshHierarchy mesh(3, 1);
  const Basis1D basis = make_basis(BasisKind::Lagrange, 3);
  const GlobalOperator<double> od(mesh, basis);
  const GlobalOperator<float> of(mesh, basis);
  const auto x = random_vector(od.n_dofs(1), 11);
  std::vector<float> xf(x.begin(), x.end()), yf(x.size());
  std::vector<double> y(x.size());
  od.vmult(1, y, x);
  of.vmult(1, yf, xf);
  std::vector<double> yfd(yf.begin(), yf.end());
  CHECK(rel_err(yfd, Eigen::Map<const Eigen::VectorXd>(y.data(), y.size())) < 1e-5);
}

TEST_CASE("length mismatch is rejected") {
  const MeshHierarchy mesh(2, 0);
  const GlobalOperator<double> op(mesh, make_basis(BasisKind::Lagrange, 1));
  std::vector<double> x(3), y(16);
  CHECK_THROWS_AS(op.vmult(0, y, x), std::invalid_argument);
}
