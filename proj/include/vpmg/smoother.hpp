#pragma once

/// \file smoother.hpp
/// Colored multiplicative vertex-patch smoother with three local solvers.
///
///   Full      all patch DoFs; residual from the global vector
///   Dirichlet Lagrange basis without the patch-boundary nodes; residual
///             from patch data only (not the true residual)
///   Clamped   Hermite basis with value and normal derivative fixed on the
///             patch boundary; residual from patch data only (exact)
///
/// Local inverses use fast diagonalization of the separable patch matrix.

#include "vpmg/basis.hpp"
#include "vpmg/mesh.hpp"
#include "vpmg/operator.hpp"
#include "vpmg/patch_layout.hpp"
#include "vpmg/tensor.hpp"

#include <Eigen/Dense>

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vpmg {

enum class KernelKind { Full, Dirichlet, Clamped };

std::string to_string(KernelKind kind);
KernelKind kernel_from_string(const std::string& name);

/// Basis the global discretization must use for a kernel.
BasisKind basis_for(KernelKind kind);

/// Per-direction size of the local space: 2(k+1), 2k or 2k-2 for a patch
/// strip away from the domain boundary. An end on the domain boundary keeps
/// its DoFs, which are free unknowns under the weak boundary condition.
int local_size_1d(KernelKind kind, int degree, bool lower_boundary = false,
                  bool upper_boundary = false);

/// Kept positions of the 2(k+1) patch DoFs of one direction.
std::vector<int> kept_indices_1d(KernelKind kind, int degree, bool lower_boundary = false,
                                 bool upper_boundary = false);

struct PatchMatrices1D {
  Eigen::MatrixXd mass;
  Eigen::MatrixXd stiffness;
};

/// 1D interior penalty matrices of a two-cell patch: the global 1D matrix
/// restricted to the patch. An end on the domain boundary carries the weak
/// Dirichlet terms, otherwise the patch's half of the interior face.
PatchMatrices1D strip_matrices(const Basis1D& basis, double h,
                               bool lower_boundary, bool upper_boundary);

/// Patch matrices of a kernel restricted to its local space.
PatchMatrices1D build_patch_matrices(KernelKind kernel, int degree, double h,
                                     BasisKind basis_kind,
                                     bool lower_boundary = false,
                                     bool upper_boundary = false);

/// Generalized eigendecomposition L S = M S Lambda with S^T M S = I,
/// eigenvalues ascending, each eigenvector signed so that its entry of
/// largest magnitude is positive.
struct FastDiag1D {
  Eigen::MatrixXd eigenvectors;
  Eigen::VectorXd eigenvalues;
};

class FastDiagError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

FastDiag1D fast_diagonalization(const Eigen::MatrixXd& stiffness,
                                const Eigen::MatrixXd& mass);

/// Separable inverse (S x ... x S)(sum of Lambdas)^{-1}(S^T x ... x S^T).
template <typename Number>
class TensorInverse {
 public:
  struct Direction {
    DenseMatrix<Number> s;
    DenseMatrix<Number> s_t;
    std::vector<Number> lambda;
  };

  static Direction make_direction(const FastDiag1D& fd);

  /// x = A^{-1} r for a patch whose direction d uses `dirs[d]`.
  static void apply(std::span<const Direction* const> dirs, int dim,
                    const Number* r, Number* x, TensorScratch<Number>& scratch);
};

/// x = A_j^{-1} r_j with A_j = sum_d L_d x M_others, from per-direction
/// decompositions. Throws on a length mismatch.
std::vector<double> apply_patch_inverse(std::span<const FastDiag1D> directions,
                                        std::span<const double> r);

/// Dense A_j = sum_d (x_e M_e with L_d in slot d), lexicographic x fastest.
Eigen::MatrixXd kronecker_sum(std::span<const PatchMatrices1D> directions);

template <typename Number>
class PatchSmoother {
 public:
  PatchSmoother(const GlobalOperator<Number>& op, int level, KernelKind kernel);

  const GlobalOperator<Number>& op() const { return *op_; }
  KernelKind kernel() const { return kernel_; }
  int level() const { return level_; }
  const std::vector<ColorClass>& colors() const { return colors_; }
  const PatchDoFLayout& layout() const { return layout_; }
  /// Size of V_j; patches touching the domain boundary are larger.
  std::size_t local_size(const VertexPatch& patch) const {
    return kept_positions_[combination(patch)].size();
  }
  std::size_t max_local_size() const { return max_local_size_; }

  /// One sweep over all colors in forward order.
  void smooth(std::span<Number> x, std::span<const Number> b) const;

  /// All patches of one color. Residuals come from the state before the
  /// color; `order` permutes the patch loop (defaults to storage order).
  void smooth_color(int color, std::span<Number> x, std::span<const Number> b,
                    std::span<const std::size_t> order = {}) const;

  /// r_j on V_j in patch-lexicographic order (restricted to the local
  /// space). Full: R_j(b - A x); Dirichlet and Clamped: from patch data.
  std::vector<Number> local_residual(const VertexPatch& patch,
                                     std::span<const Number> x,
                                     std::span<const Number> b) const;

  /// Local residual from already gathered full-patch vectors.
  void local_residual_from_patch(const VertexPatch& patch, const Number* x_patch,
                                 const Number* b_patch, Number* r_local,
                                 TensorScratch<Number>& scratch) const;

  /// A_j^{-1} r_j, both on V_j.
  void apply_local_inverse(const VertexPatch& patch, const Number* r_local,
                           Number* c_local, TensorScratch<Number>& scratch) const;

  /// Add a V_j correction into a full-patch vector.
  void embed_add(const VertexPatch& patch, const Number* c_local, Number* patch_full) const;
  /// Restrict a full-patch vector to V_j.
  void restrict_to_local(const VertexPatch& patch, const Number* patch_full,
                         Number* local) const;

  /// Global indices of V_j (R_j) and of the domain of dependence (R-bar_j).
  std::vector<std::size_t> restriction_indices(const VertexPatch& patch) const;
  std::vector<std::size_t> dependence_indices(const VertexPatch& patch) const;

  /// Dense A_j of a patch (testing).
  Eigen::MatrixXd local_matrix(const VertexPatch& patch) const;

 private:
  int variant(const VertexPatch& patch, int dir) const;
  // sum_d variant(d) 4^d
  int combination(const VertexPatch& patch) const;
  void first_dofs(const VertexPatch& patch, std::size_t* out) const;

  const GlobalOperator<Number>* op_;
  int level_;
  KernelKind kernel_;
  int dim_;
  std::size_t dpc_;
  PatchDoFLayout layout_;
  std::vector<ColorClass> colors_;
  // V_j -> full patch position, per combination
  std::vector<std::vector<std::size_t>> kept_positions_;
  std::size_t max_local_size_ = 0;
  // per variant (lower boundary + 2 * upper boundary)
  std::array<typename TensorInverse<Number>::Direction, 4> inverse_;
  std::array<PatchMatrices1D, 4> local_1d_;
  std::array<DenseMatrix<Number>, 4> stiffness_rows_;  // L[kept, :]
  std::array<DenseMatrix<Number>, 4> mass_rows_;       // M[kept, :]
};

}  // namespace vpmg
