#pragma once

/// \file krylov.hpp
/// Right-preconditioned GMRES without restart and the fractional iteration
/// count used to compare preconditioners.

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace vpmg {

enum class PrecisionMode { Double, Mixed };

struct SolverConfig {
  double rtol = 1e-8;
  int max_iterations = 100;
  PrecisionMode precision = PrecisionMode::Double;

  void validate() const;
};

struct ConvergenceHistory {
  std::vector<double> residuals;  // ||r_0|| .. ||r_n||
  int iterations = 0;
  bool converged = false;
  double nu = 0.0;

  double relative_residual() const {
    return residuals.empty() || residuals.front() == 0.0
               ? 0.0
               : residuals.back() / residuals.front();
  }
};

using LinearMap = std::function<void(std::span<const double> in, std::span<double> out)>;
using InnerProduct =
    std::function<double(std::span<const double> a, std::span<const double> b)>;

/// Euclidean inner product with a fixed summation order.
double dot(std::span<const double> a, std::span<const double> b);

/// Solve A x = b from x0 = 0 with right preconditioner P; the history holds
/// the GMRES residual estimates, which equal true residual norms in exact
/// arithmetic. Stops when ||r_n|| <= rtol ||r_0||. An empty `inner` uses dot().
ConvergenceHistory gmres(const LinearMap& a, std::span<const double> b,
                         std::span<double> x, const LinearMap& preconditioner,
                         const SolverConfig& config, const InnerProduct& inner = {});

class AlreadyConverged : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// nu = log10(rtol) / log10(rbar) with rbar = (||r_n|| / ||r_0||)^(1/n), so
/// nu = n when the reduction is exactly rtol. Throws AlreadyConverged for a
/// zero initial residual or n = 0.
double fractional_iterations(const ConvergenceHistory& history, double rtol = 1e-8);

}  // namespace vpmg
