#include "vpmg/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vpmg {

void SolverConfig::validate() const {
  if (!(rtol > 0.0 && rtol < 1.0)) throw std::invalid_argument("rtol must lie in (0,1)");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be positive");
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

ConvergenceHistory gmres(const LinearMap& a, std::span<const double> b,
                         std::span<double> x, const LinearMap& preconditioner,
                         const SolverConfig& config, const InnerProduct& inner_in) {
  config.validate();
  if (x.size() != b.size()) throw std::invalid_argument("gmres: size mismatch");
  const InnerProduct inner = inner_in ? inner_in : InnerProduct(dot);
  const std::size_t n = b.size();
  const int m = config.max_iterations;

  ConvergenceHistory hist;
  std::fill(x.begin(), x.end(), 0.0);
  const double beta = std::sqrt(inner(b, b));
  hist.residuals.push_back(beta);
  if (beta == 0.0) {
    hist.converged = true;
    return hist;
  }

  std::vector<std::vector<double>> v(1, std::vector<double>(b.begin(), b.end()));
  for (double& e : v[0]) e /= beta;
  std::vector<std::vector<double>> h;  // column j has j+2 entries
  std::vector<std::vector<double>> z;  // preconditioned directions, kept since P may be inexact
  std::vector<double> cs, sn, g{beta};
  std::vector<double> w(n);

  int j = 0;
  for (; j < m; ++j) {
    z.emplace_back(n);
    preconditioner(v[j], z[j]);
    a(z[j], w);
    std::vector<double> col(j + 2, 0.0);
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i <= j; ++i) {
        const double hij = inner(w, v[i]);
        col[i] += hij;
        for (std::size_t q = 0; q < n; ++q) w[q] -= hij * v[i][q];
      }
      if (pass == 1) break;
      const double norm = std::sqrt(inner(w, w));
      double loss = 0.0;
      for (int i = 0; i <= j && norm > 0.0; ++i)
        loss = std::max(loss, std::abs(inner(w, v[i])) / norm);
      if (loss <= 1e-8) break;
    }
    col[j + 1] = std::sqrt(inner(w, w));

    for (int i = 0; i < j; ++i) {
      const double t = cs[i] * col[i] + sn[i] * col[i + 1];
      col[i + 1] = -sn[i] * col[i] + cs[i] * col[i + 1];
      col[i] = t;
    }
    const double r = std::hypot(col[j], col[j + 1]);
    cs.push_back(r == 0.0 ? 1.0 : col[j] / r);
    sn.push_back(r == 0.0 ? 0.0 : col[j + 1] / r);
    const double hnext = col[j + 1];
    col[j] = r;
    col[j + 1] = 0.0;
    g.push_back(-sn[j] * g[j]);
    g[j] = cs[j] * g[j];
    h.push_back(std::move(col));
    hist.residuals.push_back(std::abs(g[j + 1]));

    if (std::abs(g[j + 1]) <= config.rtol * beta || hnext == 0.0) {
      ++j;
      hist.converged = std::abs(g[j]) <= config.rtol * beta || hnext == 0.0;
      break;
    }
    v.emplace_back(w);
    for (double& e : v.back()) e /= hnext;
  }
  hist.iterations = j;
  if (!hist.converged) hist.converged = hist.residuals.back() <= config.rtol * beta;

  // y = H^{-1} g, then x = Z y
  std::vector<double> y(j);
  for (int i = j - 1; i >= 0; --i) {
    double s = g[i];
    for (int k = i + 1; k < j; ++k) s -= h[k][i] * y[k];
    y[i] = s / h[i][i];
  }
  for (int i = 0; i < j; ++i)
    for (std::size_t q = 0; q < n; ++q) x[q] += y[i] * z[i][q];

  if (hist.iterations > 0 && hist.relative_residual() < 1.0)
    hist.nu = fractional_iterations(hist, config.rtol);
  return hist;
}

double fractional_iterations(const ConvergenceHistory& history, double rtol) {
  if (history.residuals.empty() || history.residuals.front() == 0.0)
    throw AlreadyConverged("initial residual is zero: already converged");
  const int n = static_cast<int>(history.residuals.size()) - 1;
  if (n < 1) throw AlreadyConverged("no iterations performed: already converged");
  const double ratio = history.residuals.back() / history.residuals.front();
  if (ratio <= 0.0) return 0.0;
  const double rbar = std::pow(ratio, 1.0 / n);
  if (rbar >= 1.0)
    throw std::domain_error("residual did not decrease; fractional count undefined");
  return std::log10(rtol) / std::log10(rbar);
}

}  // namespace vpmg
