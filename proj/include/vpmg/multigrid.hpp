#pragma once

/// \file multigrid.hpp
/// Geometric multigrid V-cycle: canonical embedding between nested levels,
/// its transpose as restriction, vertex-patch smoothing and an exact coarse
/// solve on level 0.

#include "vpmg/operator.hpp"
#include "vpmg/smoother.hpp"

#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace vpmg {

/// Coefficients of the coarse basis function j on child `child` (0 lower,
/// 1 upper half) with respect to the fine basis: row i applies fine
/// functional i to the coarse function.
Eigen::MatrixXd embedding_matrix_1d(const Basis1D& basis, int child);

template <typename Number>
class Transfer {
 public:
  Transfer(const MeshHierarchy& mesh, const Basis1D& basis);

  /// fine (+)= P coarse, where coarse lives on `coarse_level`.
  void prolongate(int coarse_level, std::span<const Number> coarse,
                  std::span<Number> fine, bool add = false) const;
  /// coarse = P^T fine.
  void restrict_to_coarse(int coarse_level, std::span<const Number> fine,
                          std::span<Number> coarse) const;

  DoFVector<Number> prolongate(const DoFVector<Number>& coarse) const;
  DoFVector<Number> restrict_to_coarse(const DoFVector<Number>& fine) const;

  /// Work on one coarse cell only (used by the rank simulation).
  void prolongate_cell(int coarse_level, std::size_t cell, const Number* coarse,
                       Number* fine, bool add, TensorScratch<Number>& scratch) const;
  void restrict_cell(int coarse_level, std::size_t cell, const Number* fine,
                     Number* coarse, TensorScratch<Number>& scratch) const;

 private:
  void check(int coarse_level, std::size_t n_coarse, std::size_t n_fine) const;

  const MeshHierarchy* mesh_;
  std::size_t dpc_;
  std::array<DenseMatrix<Number>, 2> p_, p_t_;
};

/// A_0^{-1} on the level-0 mesh. Level 0 is a single vertex patch with weak
/// Dirichlet ends in every direction, so its matrix is separable and fast
/// diagonalization gives the exact inverse.
template <typename Number>
class CoarseSolver {
 public:
  explicit CoarseSolver(const GlobalOperator<Number>& op);
  void solve(std::span<const Number> b, std::span<Number> x) const;

 private:
  int dim_;
  std::size_t n_;
  PatchDoFLayout layout_;
  typename TensorInverse<Number>::Direction dir_;
};

template <typename Number>
using LevelFunction =
    std::function<void(int level, std::span<Number> x, std::span<const Number> b)>;

/// Replaceable pieces of a V-cycle. Empty members use the serial defaults.
template <typename Number>
struct VCycleHooks {
  LevelFunction<Number> vmult;   // x := A_level b
  LevelFunction<Number> smooth;  // one smoothing sweep on x for rhs b
};

template <typename Number>
class VCycle {
 public:
  VCycle(const GlobalOperator<Number>& op, KernelKind kernel, int pre_steps = 1,
         int post_steps = 1, VCycleHooks<Number> hooks = {});
  VCycle(const VCycle&) = delete;
  VCycle& operator=(const VCycle&) = delete;

  int finest_level() const { return op_->mesh().finest_level(); }
  const GlobalOperator<Number>& op() const { return *op_; }
  const Transfer<Number>& transfer() const { return transfer_; }
  const PatchSmoother<Number>& smoother(int level) const { return *smoothers_.at(level); }

  /// x = P^{-1} b on the finest level.
  void apply(std::span<const Number> b, std::span<Number> x) const;
  DoFVector<Number> apply(const DoFVector<Number>& b) const;

  /// One cycle starting on `level`.
  void cycle(int level, std::span<const Number> b, std::span<Number> x) const;

 private:
  const GlobalOperator<Number>* op_;
  int pre_;
  int post_;
  VCycleHooks<Number> hooks_;
  Transfer<Number> transfer_;
  CoarseSolver<Number> coarse_;
  std::vector<std::unique_ptr<PatchSmoother<Number>>> smoothers_;  // [0] empty
};

/// Double-precision front end of a single-precision V-cycle: the input is
/// rounded to float on entry and the result widened on exit.
class MixedPrecisionVCycle {
 public:
  MixedPrecisionVCycle(const MeshHierarchy& mesh, const Basis1D& basis,
                       KernelKind kernel, double penalty_factor = 1.0,
                       int pre_steps = 1, int post_steps = 1);
  MixedPrecisionVCycle(const MixedPrecisionVCycle&) = delete;
  MixedPrecisionVCycle& operator=(const MixedPrecisionVCycle&) = delete;

  void apply(std::span<const double> b, std::span<double> x) const;

 private:
  GlobalOperator<float> op_;
  VCycle<float> cycle_;
};

}  // namespace vpmg
