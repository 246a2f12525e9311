#include "vpmg/smoother.hpp"

#include <algorithm>
#include <stdexcept>

namespace vpmg {

std::string to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::Full: return "full";
    case KernelKind::Dirichlet: return "dirichlet";
    case KernelKind::Clamped: return "clamped";
  }
  return "unknown";
}

KernelKind kernel_from_string(const std::string& name) {
  if (name == "full") return KernelKind::Full;
  if (name == "dirichlet") return KernelKind::Dirichlet;
  if (name == "clamped") return KernelKind::Clamped;
  throw std::invalid_argument("unknown kernel '" + name + "'");
}

BasisKind basis_for(KernelKind kind) {
  return kind == KernelKind::Clamped ? BasisKind::Hermite : BasisKind::Lagrange;
}

int local_size_1d(KernelKind kind, int degree, bool lower_boundary, bool upper_boundary) {
  return static_cast<int>(kept_indices_1d(kind, degree, lower_boundary, upper_boundary).size());
}

std::vector<int> kept_indices_1d(KernelKind kind, int degree, bool lower_boundary,
                                 bool upper_boundary) {
  const int n = 2 * (degree + 1);
  const int drop = kind == KernelKind::Full ? 0 : kind == KernelKind::Dirichlet ? 1 : 2;
  std::vector<int> kept;
  for (int i = lower_boundary ? 0 : drop; i < (upper_boundary ? n : n - drop); ++i)
    kept.push_back(i);
  return kept;
}

namespace {

void check_compatible(KernelKind kernel, BasisKind kind, int degree) {
  if (basis_for(kernel) != kind)
    throw std::invalid_argument(to_string(kernel) + " kernel requires the " +
                                (kind == BasisKind::Lagrange ? "Hermite" : "Lagrange") +
                                " basis");
  if (degree < 1) throw std::invalid_argument("degree must be at least 1");
  if (kernel == KernelKind::Clamped && degree < 3)
    throw std::invalid_argument("clamped kernel requires degree >= 3");
}

Eigen::MatrixXd select(const Eigen::MatrixXd& a, const std::vector<int>& rows,
                       const std::vector<int>& cols) {
  Eigen::MatrixXd s(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) s(i, j) = a(rows[i], cols[j]);
  return s;
}

std::vector<int> all_indices(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

PatchMatrices1D strip_matrices(const Basis1D& basis, double h, bool lower,
                               bool upper, double penalty_factor,
                               FaceTreatment inner = FaceTreatment::InteriorNeighbor) {
  PatchMatrices1D m;
  m.mass = assemble_mass_1d(basis, 2, h).values;
  m.stiffness = assemble_sipg_1d(basis, 2, h, lower ? FaceTreatment::WeakDirichlet : inner,
                                 upper ? FaceTreatment::WeakDirichlet : inner, penalty_factor)
                    .values;
  return m;
}

}  // namespace

PatchMatrices1D strip_matrices(const Basis1D& basis, double h,
                               bool lower_boundary, bool upper_boundary) {
  return strip_matrices(basis, h, lower_boundary, upper_boundary, 1.0);
}

PatchMatrices1D build_patch_matrices(KernelKind kernel, int degree, double h,
                                     BasisKind basis_kind, bool lower_boundary,
                                     bool upper_boundary) {
  check_compatible(kernel, basis_kind, degree);
  if (h <= 0) throw std::invalid_argument("cell size must be positive");
  const Basis1D basis = make_basis(basis_kind, degree);
  const PatchMatrices1D strip = strip_matrices(basis, h, lower_boundary, upper_boundary);
  const std::vector<int> kept =
      kept_indices_1d(kernel, degree, lower_boundary, upper_boundary);
  return {select(strip.mass, kept, kept), select(strip.stiffness, kept, kept)};
}

template <typename Number>
PatchSmoother<Number>::PatchSmoother(const GlobalOperator<Number>& op, int level,
                                     KernelKind kernel)
    : op_(&op), level_(level), kernel_(kernel), dim_(op.dim()),
      dpc_(op.dofs_per_cell()), layout_(op.dim(), op.basis().size()) {
  const Basis1D& basis = op.basis();
  check_compatible(kernel, basis.kind(), basis.degree());
  if (level < 0 || level >= op.mesh().n_levels())
    throw std::out_of_range("smoother level out of range");

  const auto patches = enumerate_patches(op.mesh(), level);
  colors_ = color_patches(patches, dim_);

  const int np = layout_.dofs_per_direction();
  std::array<std::vector<bool>, 4> keep;
  for (int v = 0; v < 4; ++v) {
    keep[v].assign(np, false);
    for (int i : kept_indices_1d(kernel, basis.degree(), v & 1, v & 2)) keep[v][i] = true;
  }
  int combos = 1;
  for (int d = 0; d < dim_; ++d) combos *= 4;
  kept_positions_.resize(combos);
  for (int c = 0; c < combos; ++c) {
    for (std::size_t p = 0; p < layout_.size(); ++p) {
      std::size_t rest = p;
      int v = c;
      bool inside = true;
      for (int d = 0; d < dim_; ++d) {
        inside = inside && keep[v % 4][rest % np];
        rest /= np;
        v /= 4;
      }
      if (inside) kept_positions_[c].push_back(p);
    }
    max_local_size_ = std::max(max_local_size_, kept_positions_[c].size());
  }

  const double h = op.mesh().cell_size(level);
  const std::vector<int> cols = all_indices(np);
  for (int v = 0; v < 4; ++v) {
    const std::vector<int> kept = kept_indices_1d(kernel, basis.degree(), v & 1, v & 2);
    const PatchMatrices1D strip =
        strip_matrices(basis, h, v & 1, v & 2, op.penalty_factor());
    local_1d_[v] = {select(strip.mass, kept, kept), select(strip.stiffness, kept, kept)};
    inverse_[v] = TensorInverse<Number>::make_direction(
        fast_diagonalization(local_1d_[v].stiffness, local_1d_[v].mass));
    // Residual rows. On V_j only the -[u]{grad v} part of a patch-boundary face
    // survives; it needs exterior traces and is left out whole. No effect for
    // the clamped space, where every face term vanishes on those rows.
    const PatchMatrices1D rows =
        strip_matrices(basis, h, v & 1, v & 2, op.penalty_factor(), FaceTreatment::None);
    stiffness_rows_[v] = DenseMatrix<Number>(select(rows.stiffness, kept, cols));
    mass_rows_[v] = DenseMatrix<Number>(select(strip.mass, kept, cols));
  }
}

template <typename Number>
int PatchSmoother<Number>::variant(const VertexPatch& patch, int dir) const {
  const auto bd = patch.at_boundary(dir, op_->mesh().cells_per_direction(level_));
  return (bd[0] ? 1 : 0) + (bd[1] ? 2 : 0);
}

template <typename Number>
int PatchSmoother<Number>::combination(const VertexPatch& patch) const {
  int c = 0;
  for (int d = dim_ - 1; d >= 0; --d) c = 4 * c + variant(patch, d);
  return c;
}

template <typename Number>
void PatchSmoother<Number>::first_dofs(const VertexPatch& patch,
                                       std::size_t* out) const {
  for (std::size_t s = 0; s < patch.cells.size(); ++s) out[s] = patch.cells[s] * dpc_;
}

template <typename Number>
void PatchSmoother<Number>::local_residual_from_patch(
    const VertexPatch& patch, const Number* x_patch, const Number* b_patch,
    Number* r_local, TensorScratch<Number>& scratch) const {
  if (kernel_ == KernelKind::Full)
    throw std::logic_error("full kernel residual needs the global vector");
  // A-bar_j: rows of V_j, columns of the whole patch
  std::array<int, 3> v{};
  for (int d = 0; d < dim_; ++d) v[d] = variant(patch, d);
  for (int d = 0; d < dim_; ++d) {
    std::array<const DenseMatrix<Number>*, 3> f{};
    for (int e = 0; e < dim_; ++e) f[e] = e == d ? &stiffness_rows_[v[e]] : &mass_rows_[v[e]];
    apply_kronecker<Number>(f, dim_, x_patch, r_local, d > 0, scratch);
  }
  const auto& kept = kept_positions_[combination(patch)];
  for (std::size_t i = 0; i < kept.size(); ++i) r_local[i] = b_patch[kept[i]] - r_local[i];
}

template <typename Number>
void PatchSmoother<Number>::apply_local_inverse(const VertexPatch& patch,
                                                const Number* r_local,
                                                Number* c_local,
                                                TensorScratch<Number>& scratch) const {
  std::array<const typename TensorInverse<Number>::Direction*, 3> dirs{};
  for (int d = 0; d < dim_; ++d) dirs[d] = &inverse_[variant(patch, d)];
  TensorInverse<Number>::apply(dirs, dim_, r_local, c_local, scratch);
}

template <typename Number>
void PatchSmoother<Number>::embed_add(const VertexPatch& patch, const Number* c_local,
                                      Number* patch_full) const {
  const auto& kept = kept_positions_[combination(patch)];
  for (std::size_t i = 0; i < kept.size(); ++i) patch_full[kept[i]] += c_local[i];
}

template <typename Number>
void PatchSmoother<Number>::restrict_to_local(const VertexPatch& patch,
                                              const Number* patch_full,
                                              Number* local) const {
  const auto& kept = kept_positions_[combination(patch)];
  for (std::size_t i = 0; i < kept.size(); ++i) local[i] = patch_full[kept[i]];
}

template <typename Number>
std::vector<Number> PatchSmoother<Number>::local_residual(
    const VertexPatch& patch, std::span<const Number> x,
    std::span<const Number> b) const {
  const std::size_t n = op_->n_dofs(level_);
  if (x.size() != n || b.size() != n)
    throw std::invalid_argument("vector length does not match smoother level");
  std::array<std::size_t, 8> first{};
  first_dofs(patch, first.data());
  const std::span<const std::size_t> fs(first.data(), patch.cells.size());
  std::vector<Number> r_local(local_size(patch));

  if (kernel_ == KernelKind::Full) {
    std::vector<Number> r(n);
    op_->vmult(level_, r, x);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    std::vector<Number> rp(layout_.size());
    layout_.gather<Number>(fs, r.data(), rp.data());
    restrict_to_local(patch, rp.data(), r_local.data());
    return r_local;
  }
  std::vector<Number> xp(layout_.size()), bp(layout_.size());
  layout_.gather<Number>(fs, x.data(), xp.data());
  layout_.gather<Number>(fs, b.data(), bp.data());
  TensorScratch<Number> scratch;
  local_residual_from_patch(patch, xp.data(), bp.data(), r_local.data(), scratch);
  return r_local;
}

template <typename Number>
void PatchSmoother<Number>::smooth_color(int color, std::span<Number> x,
                                         std::span<const Number> b,
                                         std::span<const std::size_t> order) const {
  const std::size_t n = op_->n_dofs(level_);
  if (x.size() != n || b.size() != n)
    throw std::invalid_argument("vector length does not match smoother level");
  if (color < 0 || color >= static_cast<int>(colors_.size()))
    throw std::out_of_range("color out of range");
  const auto& patches = colors_[color].patches;
  if (!order.empty() && order.size() != patches.size())
    throw std::invalid_argument("patch order has wrong length");

  std::vector<Number> r;
  if (kernel_ == KernelKind::Full) {
    r.resize(n);
    op_->vmult(level_, r, std::span<const Number>(x.data(), n));
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
  }

  std::vector<Number> xp(layout_.size()), bp(layout_.size());
  std::vector<Number> r_local(max_local_size_), c_local(max_local_size_);
  std::array<std::size_t, 8> first{};
  TensorScratch<Number> scratch;
  for (std::size_t q = 0; q < patches.size(); ++q) {
    const VertexPatch& patch = patches[order.empty() ? q : order[q]];
    first_dofs(patch, first.data());
    const std::span<const std::size_t> fs(first.data(), patch.cells.size());
    if (kernel_ == KernelKind::Full) {
      layout_.gather<Number>(fs, r.data(), xp.data());
      restrict_to_local(patch, xp.data(), r_local.data());
    } else {
      layout_.gather<Number>(fs, x.data(), xp.data());
      layout_.gather<Number>(fs, b.data(), bp.data());
      local_residual_from_patch(patch, xp.data(), bp.data(), r_local.data(), scratch);
    }
    apply_local_inverse(patch, r_local.data(), c_local.data(), scratch);
    const auto& kept = kept_positions_[combination(patch)];
    for (std::size_t i = 0; i < kept.size(); ++i) {
      const std::size_t p = kept[i];
      x[first[layout_.cell_slot[p]] + layout_.local_index[p]] += c_local[i];
    }
  }
}

template <typename Number>
void PatchSmoother<Number>::smooth(std::span<Number> x,
                                   std::span<const Number> b) const {
  for (std::size_t c = 0; c < colors_.size(); ++c)
    smooth_color(static_cast<int>(c), x, b);
}

template <typename Number>
std::vector<std::size_t> PatchSmoother<Number>::restriction_indices(
    const VertexPatch& patch) const {
  std::array<std::size_t, 8> first{};
  first_dofs(patch, first.data());
  std::vector<std::size_t> idx;
  const auto& kept = kept_positions_[combination(patch)];
  idx.reserve(kept.size());
  for (std::size_t p : kept)
    idx.push_back(first[layout_.cell_slot[p]] + layout_.local_index[p]);
  return idx;
}

template <typename Number>
std::vector<std::size_t> PatchSmoother<Number>::dependence_indices(
    const VertexPatch& patch) const {
  std::vector<std::size_t> cells(patch.cells.begin(), patch.cells.end());
  if (kernel_ == KernelKind::Full) {
    for (std::size_t c : patch.cells)
      for (int d = 0; d < dim_; ++d)
        for (int side = 0; side < 2; ++side)
          if (auto nb = op_->mesh().neighbor(level_, c, d, side)) cells.push_back(*nb);
  }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  std::vector<std::size_t> idx;
  idx.reserve(cells.size() * dpc_);
  for (std::size_t c : cells)
    for (std::size_t l = 0; l < dpc_; ++l) idx.push_back(c * dpc_ + l);
  return idx;
}

template <typename Number>
Eigen::MatrixXd PatchSmoother<Number>::local_matrix(const VertexPatch& patch) const {
  std::vector<PatchMatrices1D> dirs;
  for (int d = 0; d < dim_; ++d) dirs.push_back(local_1d_[variant(patch, d)]);
  return kronecker_sum(dirs);
}

template class PatchSmoother<double>;
template class PatchSmoother<float>;

}  // namespace vpmg
