#include "vpmg/smoother.hpp"

namespace vpmg {

FastDiag1D fast_diagonalization(const Eigen::MatrixXd& stiffness,
                                const Eigen::MatrixXd& mass) {
  const Eigen::Index n = mass.rows();
  if (mass.cols() != n || stiffness.rows() != n || stiffness.cols() != n)
    throw std::invalid_argument("fast diagonalization needs square matrices of equal size");

  // M = C C^T, then the standard problem C^{-1} L C^{-T} Q = Q Lambda.
  Eigen::LLT<Eigen::MatrixXd> chol(mass);
  if (chol.info() != Eigen::Success)
    throw FastDiagError("mass matrix is not symmetric positive definite");
  const Eigen::MatrixXd c = chol.matrixL();
  Eigen::MatrixXd b = c.triangularView<Eigen::Lower>().solve(stiffness);
  b = c.triangularView<Eigen::Lower>().solve(b.transpose()).transpose();
  b = 0.5 * (b + b.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b);
  if (eig.info() != Eigen::Success)
    throw FastDiagError("symmetric eigensolver did not converge");

  FastDiag1D fd;
  fd.eigenvalues = eig.eigenvalues();
  fd.eigenvectors =
      c.transpose().triangularView<Eigen::Upper>().solve(eig.eigenvectors());
  for (Eigen::Index j = 0; j < n; ++j) {
    auto col = fd.eigenvectors.col(j);
    col /= std::sqrt(col.dot(mass * col));
    Eigen::Index imax = 0;
    col.cwiseAbs().maxCoeff(&imax);
    if (col[imax] < 0) col = -col;
  }
  return fd;
}

template <typename Number>
typename TensorInverse<Number>::Direction TensorInverse<Number>::make_direction(
    const FastDiag1D& fd) {
  Direction d;
  d.s = DenseMatrix<Number>(fd.eigenvectors);
  d.s_t = d.s.transposed();
  d.lambda.resize(fd.eigenvalues.size());
  for (Eigen::Index i = 0; i < fd.eigenvalues.size(); ++i)
    d.lambda[i] = static_cast<Number>(fd.eigenvalues[i]);
  return d;
}

template <typename Number>
void TensorInverse<Number>::apply(std::span<const Direction* const> dirs, int dim,
                                  const Number* r, Number* x,
                                  TensorScratch<Number>& scratch) {
  std::array<const DenseMatrix<Number>*, 3> f{};
  std::size_t n = 1;
  for (int d = 0; d < dim; ++d) {
    f[d] = &dirs[d]->s_t;
    n *= dirs[d]->lambda.size();
  }
  std::vector<Number> t(n);
  apply_kronecker<Number>(f, dim, r, t.data(), false, scratch);

  const int n0 = static_cast<int>(dirs[0]->lambda.size());
  const int n1 = static_cast<int>(dirs[1]->lambda.size());
  const int n2 = dim == 3 ? static_cast<int>(dirs[2]->lambda.size()) : 1;
  std::size_t idx = 0;
  for (int k = 0; k < n2; ++k) {
    const Number l2 = dim == 3 ? dirs[2]->lambda[k] : Number(0);
    for (int j = 0; j < n1; ++j) {
      const Number l12 = l2 + dirs[1]->lambda[j];
      for (int i = 0; i < n0; ++i, ++idx) t[idx] /= l12 + dirs[0]->lambda[i];
    }
  }

  for (int d = 0; d < dim; ++d) f[d] = &dirs[d]->s;
  apply_kronecker<Number>(f, dim, t.data(), x, false, scratch);
}

template class TensorInverse<double>;
template class TensorInverse<float>;

std::vector<double> apply_patch_inverse(std::span<const FastDiag1D> directions,
                                        std::span<const double> r) {
  const int dim = static_cast<int>(directions.size());
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("patch inverse needs 2 or 3 directions");
  std::size_t n = 1;
  std::array<TensorInverse<double>::Direction, 3> dirs;
  std::array<const TensorInverse<double>::Direction*, 3> ptr{};
  for (int d = 0; d < dim; ++d) {
    dirs[d] = TensorInverse<double>::make_direction(directions[d]);
    ptr[d] = &dirs[d];
    n *= directions[d].eigenvalues.size();
  }
  if (r.size() != n)
    throw std::invalid_argument("local residual length " + std::to_string(r.size()) +
                                " does not match patch size " + std::to_string(n));
  std::vector<double> x(n);
  TensorScratch<double> scratch;
  TensorInverse<double>::apply(ptr, dim, r.data(), x.data(), scratch);
  return x;
}

namespace {

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

}  // namespace

Eigen::MatrixXd kronecker_sum(std::span<const PatchMatrices1D> directions) {
  const int dim = static_cast<int>(directions.size());
  Eigen::MatrixXd sum;
  for (int d = 0; d < dim; ++d) {
    // slowest direction first: A_{dim-1} x ... x A_0
    Eigen::MatrixXd term =
        d == dim - 1 ? directions[dim - 1].stiffness : directions[dim - 1].mass;
    for (int e = dim - 2; e >= 0; --e)
      term = kron(term, e == d ? directions[e].stiffness : directions[e].mass);
    sum = d == 0 ? term : Eigen::MatrixXd(sum + term);
  }
  return sum;
}

}  // namespace vpmg
