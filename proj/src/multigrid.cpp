#include "vpmg/multigrid.hpp"

#include <stdexcept>
#include <string>

namespace vpmg {

Eigen::MatrixXd embedding_matrix_1d(const Basis1D& basis, int child) {
  if (child != 0 && child != 1) throw std::invalid_argument("child must be 0 or 1");
  const int n = basis.size();
  Eigen::MatrixXd p(n, n);
  const auto& fn = basis.functionals();
  for (int i = 0; i < n; ++i) {
    const double x = 0.5 * (fn[i].point + child);
    for (int j = 0; j < n; ++j)
      p(i, j) = fn[i].derivative == 0 ? basis.value(j, x) : 0.5 * basis.derivative(j, x);
  }
  return p;
}

template <typename Number>
Transfer<Number>::Transfer(const MeshHierarchy& mesh, const Basis1D& basis)
    : mesh_(&mesh), dpc_(1) {
  for (int d = 0; d < mesh.dim(); ++d) dpc_ *= basis.size();
  for (int s = 0; s < 2; ++s) {
    p_[s] = DenseMatrix<Number>(embedding_matrix_1d(basis, s));
    p_t_[s] = p_[s].transposed();
  }
}

template <typename Number>
void Transfer<Number>::check(int coarse_level, std::size_t n_coarse,
                             std::size_t n_fine) const {
  if (coarse_level < 0 || coarse_level >= mesh_->finest_level())
    throw std::out_of_range("transfer from level " + std::to_string(coarse_level) +
                            " out of range");
  if (n_coarse != mesh_->n_cells(coarse_level) * dpc_ ||
      n_fine != mesh_->n_cells(coarse_level + 1) * dpc_)
    throw std::invalid_argument("transfer vector length mismatch");
}

template <typename Number>
void Transfer<Number>::prolongate_cell(int coarse_level, std::size_t cell,
                                       const Number* coarse, Number* fine, bool add,
                                       TensorScratch<Number>& scratch) const {
  const int dim = mesh_->dim();
  const auto children = mesh_->children(coarse_level, cell);
  for (std::size_t c = 0; c < children.size(); ++c) {
    std::array<const DenseMatrix<Number>*, 3> f{};
    for (int d = 0; d < dim; ++d) f[d] = &p_[(c >> d) & 1];
    apply_kronecker<Number>(f, dim, coarse + cell * dpc_, fine + children[c] * dpc_,
                            add, scratch);
  }
}

template <typename Number>
void Transfer<Number>::restrict_cell(int coarse_level, std::size_t cell,
                                     const Number* fine, Number* coarse,
                                     TensorScratch<Number>& scratch) const {
  const int dim = mesh_->dim();
  const auto children = mesh_->children(coarse_level, cell);
  for (std::size_t c = 0; c < children.size(); ++c) {
    std::array<const DenseMatrix<Number>*, 3> f{};
    for (int d = 0; d < dim; ++d) f[d] = &p_t_[(c >> d) & 1];
    apply_kronecker<Number>(f, dim, fine + children[c] * dpc_, coarse + cell * dpc_,
                            c > 0, scratch);
  }
}

template <typename Number>
void Transfer<Number>::prolongate(int coarse_level, std::span<const Number> coarse,
                                  std::span<Number> fine, bool add) const {
  check(coarse_level, coarse.size(), fine.size());
  TensorScratch<Number> scratch;
  for (std::size_t c = 0; c < mesh_->n_cells(coarse_level); ++c)
    prolongate_cell(coarse_level, c, coarse.data(), fine.data(), add, scratch);
}

template <typename Number>
void Transfer<Number>::restrict_to_coarse(int coarse_level,
                                          std::span<const Number> fine,
                                          std::span<Number> coarse) const {
  check(coarse_level, coarse.size(), fine.size());
  TensorScratch<Number> scratch;
  for (std::size_t c = 0; c < mesh_->n_cells(coarse_level); ++c)
    restrict_cell(coarse_level, c, fine.data(), coarse.data(), scratch);
}

template <typename Number>
DoFVector<Number> Transfer<Number>::prolongate(const DoFVector<Number>& coarse) const {
  if (coarse.level < 0 || coarse.level >= mesh_->finest_level())
    throw std::out_of_range("no finer level to prolongate to");
  DoFVector<Number> fine(coarse.level + 1, mesh_->n_cells(coarse.level + 1) * dpc_);
  prolongate(coarse.level, coarse.values, fine.values);
  return fine;
}

template <typename Number>
DoFVector<Number> Transfer<Number>::restrict_to_coarse(
    const DoFVector<Number>& fine) const {
  if (fine.level < 1 || fine.level > mesh_->finest_level())
    throw std::out_of_range("no coarser level to restrict to");
  DoFVector<Number> coarse(fine.level - 1, mesh_->n_cells(fine.level - 1) * dpc_);
  restrict_to_coarse(coarse.level, fine.values, coarse.values);
  return coarse;
}

template <typename Number>
CoarseSolver<Number>::CoarseSolver(const GlobalOperator<Number>& op)
    : dim_(op.dim()), n_(op.n_dofs(0)), layout_(op.dim(), op.basis().size()) {
  const double h = op.mesh().cell_size(0);
  const Matrix1D mass = assemble_mass_1d(op.basis(), 2, h);
  const Matrix1D stiff =
      assemble_sipg_1d(op.basis(), 2, h, FaceTreatment::WeakDirichlet,
                       FaceTreatment::WeakDirichlet, op.penalty_factor());
  dir_ = TensorInverse<Number>::make_direction(
      fast_diagonalization(stiff.values, mass.values));
}

template <typename Number>
void CoarseSolver<Number>::solve(std::span<const Number> b, std::span<Number> x) const {
  if (b.size() != n_ || x.size() != n_)
    throw std::invalid_argument("coarse vector length mismatch");
  // the level-0 cells in lexicographic order form the single patch
  const std::size_t cells = std::size_t{1} << dim_;
  std::vector<std::size_t> first(cells);
  for (std::size_t c = 0; c < cells; ++c) first[c] = c * (n_ / cells);
  std::vector<Number> bp(layout_.size()), xp(layout_.size());
  layout_.gather<Number>(first, b.data(), bp.data());
  std::array<const typename TensorInverse<Number>::Direction*, 3> dirs{&dir_, &dir_, &dir_};
  TensorScratch<Number> scratch;
  TensorInverse<Number>::apply(dirs, dim_, bp.data(), xp.data(), scratch);
  std::fill(x.begin(), x.end(), Number(0));
  layout_.scatter_add<Number>(first, xp.data(), x.data());
}

template <typename Number>
VCycle<Number>::VCycle(const GlobalOperator<Number>& op, KernelKind kernel,
                       int pre_steps, int post_steps, VCycleHooks<Number> hooks)
    : op_(&op), pre_(pre_steps), post_(post_steps), hooks_(std::move(hooks)),
      transfer_(op.mesh(), op.basis()), coarse_(op) {
  if (pre_steps < 0 || post_steps < 0)
    throw std::invalid_argument("smoothing step counts must be non-negative");
  smoothers_.resize(op.mesh().n_levels());
  for (int level = 1; level < op.mesh().n_levels(); ++level)
    smoothers_[level] = std::make_unique<PatchSmoother<Number>>(op, level, kernel);
  if (!hooks_.vmult)
    hooks_.vmult = [this](int level, std::span<Number> y, std::span<const Number> x) {
      op_->vmult(level, y, x);
    };
  if (!hooks_.smooth)
    hooks_.smooth = [this](int level, std::span<Number> x, std::span<const Number> b) {
      smoothers_[level]->smooth(x, b);
    };
}

template <typename Number>
void VCycle<Number>::cycle(int level, std::span<const Number> b,
                           std::span<Number> x) const {
  if (level == 0) {
    coarse_.solve(b, x);
    return;
  }
  const std::size_t n = op_->n_dofs(level);
  std::fill(x.begin(), x.end(), Number(0));
  for (int s = 0; s < pre_; ++s) hooks_.smooth(level, x, b);

  std::vector<Number> r(n);
  hooks_.vmult(level, r, x);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
  const std::size_t nc = op_->n_dofs(level - 1);
  std::vector<Number> rc(nc), xc(nc);
  transfer_.restrict_to_coarse(level - 1, r, rc);
  cycle(level - 1, rc, xc);
  transfer_.prolongate(level - 1, xc, x, true);

  for (int s = 0; s < post_; ++s) hooks_.smooth(level, x, b);
}

template <typename Number>
void VCycle<Number>::apply(std::span<const Number> b, std::span<Number> x) const {
  const int level = finest_level();
  const std::size_t n = op_->n_dofs(level);
  if (b.size() != n || x.size() != n)
    throw std::invalid_argument("V-cycle vector length mismatch");
  cycle(level, b, x);
}

template <typename Number>
DoFVector<Number> VCycle<Number>::apply(const DoFVector<Number>& b) const {
  if (b.level != finest_level())
    throw std::invalid_argument("V-cycle input must live on the finest level");
  DoFVector<Number> x(b.level, b.size());
  apply(b.values, x.values);
  return x;
}

template class Transfer<double>;
template class Transfer<float>;
template class CoarseSolver<double>;
template class CoarseSolver<float>;
template class VCycle<double>;
template class VCycle<float>;

MixedPrecisionVCycle::MixedPrecisionVCycle(const MeshHierarchy& mesh,
                                           const Basis1D& basis, KernelKind kernel,
                                           double penalty_factor, int pre_steps,
                                           int post_steps)
    : op_(mesh, basis, penalty_factor), cycle_(op_, kernel, pre_steps, post_steps) {}

void MixedPrecisionVCycle::apply(std::span<const double> b, std::span<double> x) const {
  std::vector<float> bf(b.begin(), b.end()), xf(x.size());
  cycle_.apply(bf, xf);
  std::copy(xf.begin(), xf.end(), x.begin());
}

}  // namespace vpmg
