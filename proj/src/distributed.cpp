#include "vpmg/partition.hpp"

#include <algorithm>
#include <stdexcept>

namespace vpmg {

template <typename Number>
void distributed_apply(const GlobalOperator<Number>& op, const DistributedLevel& dist,
                       std::span<Number> dst, std::span<const Number> src) {
  const int level = dist.level();
  if (dst.size() != op.n_dofs(level) || src.size() != op.n_dofs(level))
    throw std::invalid_argument("distributed apply: vector length mismatch");
  const std::size_t dpc = dist.dofs_per_cell();
  auto x = dist.distribute<Number>(src);
  DistributedLevel::Locals<Number> y(dist.nranks());
  TensorScratch<Number> scratch;
  for (int r = 0; r < dist.nranks(); ++r) {
    y[r].assign(dist.local_size(r), Number(0));
    auto read = [&](std::size_t cell) {
      const long l = dist.local_cell(r, cell);
      if (l < 0) throw std::logic_error("cell missing from the rank's ghost layer");
      return x[r].data() + static_cast<std::size_t>(l) * dpc;
    };
    const auto& cells = dist.local_cells(r);
    for (std::size_t i = 0; i < dist.n_owned_cells(r); ++i)
      op.apply_cell(level, cells[i], read, y[r].data() + i * dpc, scratch);
  }
  dist.gather_owned<Number>(y, dst);
}

template <typename Number>
void distributed_smooth(const PatchSmoother<Number>& smoother,
                        const DistributedLevel& dist, std::span<Number> x_global,
                        std::span<const Number> b_global, bool debug) {
  if (smoother.level() != dist.level())
    throw std::invalid_argument("smoother and partition live on different levels");
  const bool full = smoother.kernel() == KernelKind::Full;
  const std::size_t n = x_global.size();
  const int R = dist.nranks();

  auto x = dist.distribute<Number>(std::span<const Number>(x_global.data(), n));
  auto b = dist.distribute<Number>(b_global);
  DistributedLevel::Locals<Number> temp(R), r_loc;
  for (int r = 0; r < R; ++r) temp[r].assign(dist.local_size(r), Number(0));

  const PatchDoFLayout& layout = smoother.layout();
  std::vector<Number> xp(layout.size()), bp(layout.size()), cp(layout.size());
  std::vector<Number> r_local(smoother.max_local_size()), c_local(smoother.max_local_size());
  std::vector<std::size_t> idx;
  std::vector<Number> x_flat, res;
  TensorScratch<Number> scratch;

  for (std::size_t color = 0; color < dist.colors().size(); ++color) {
    if (full) {
      // residual of the current state, owned rows on every rank, ghosts exchanged
      x_flat.assign(n, Number(0));
      dist.gather_owned<Number>(x, x_flat);
      res.assign(n, Number(0));
      distributed_apply(smoother.op(), dist, std::span<Number>(res),
                        std::span<const Number>(x_flat));
      for (std::size_t i = 0; i < n; ++i) res[i] = b_global[i] - res[i];
      r_loc = dist.distribute<Number>(std::span<const Number>(res));
    }
    const auto& patches = dist.colors()[color].patches;
    for (int r = 0; r < R; ++r) {
      const auto& owned = dist.owned_patches(r, static_cast<int>(color));
      const GhostPatchStorage& store = dist.storage(r, static_cast<int>(color));
      for (std::size_t q = 0; q < owned.size(); ++q) {
        const VertexPatch& patch = patches[owned[q]];
        store.indices(q, idx);
        if (full) {
          for (std::size_t p = 0; p < idx.size(); ++p) xp[p] = r_loc[r][idx[p]];
          smoother.restrict_to_local(patch, xp.data(), r_local.data());
        } else {
          for (std::size_t p = 0; p < idx.size(); ++p) {
            xp[p] = x[r][idx[p]];
            bp[p] = b[r][idx[p]];
          }
          smoother.local_residual_from_patch(patch, xp.data(), bp.data(), r_local.data(),
                                             scratch);
        }
        smoother.apply_local_inverse(patch, r_local.data(), c_local.data(), scratch);
        std::fill(cp.begin(), cp.end(), Number(0));
        smoother.embed_add(patch, c_local.data(), cp.data());
        for (std::size_t p = 0; p < idx.size(); ++p) temp[r][idx[p]] += cp[p];
      }
    }
    dist.compress_add<Number>(temp, x);
    dist.update_ghosts<Number>(x);
    if (debug) dist.check_ghosts<Number>(x);
  }
  dist.gather_owned<Number>(x, x_global);
}

template <typename Number>
DistributedVCycle<Number>::DistributedVCycle(const GlobalOperator<Number>& op,
                                             KernelKind kernel, int nranks,
                                             OwnershipPolicy policy) {
  const MeshHierarchy& mesh = op.mesh();
  const int finest_n = mesh.cells_per_direction(mesh.finest_level());
  if (nranks < 1 || nranks > finest_n)
    throw std::invalid_argument("nranks must lie in [1, " + std::to_string(finest_n) + "]");
  for (int l = 0; l < mesh.n_levels(); ++l)
    levels_.push_back(std::make_unique<DistributedLevel>(
        mesh, l, nranks, op.dofs_per_cell(), op.basis().size(), policy));
  const GlobalOperator<Number>* opp = &op;
  VCycleHooks<Number> hooks;
  hooks.vmult = [this, opp](int l, std::span<Number> y, std::span<const Number> x) {
    distributed_apply(*opp, *levels_[l], y, x);
  };
  hooks.smooth = [this](int l, std::span<Number> x, std::span<const Number> b) {
    distributed_smooth(cycle_->smoother(l), *levels_[l], x, b);
  };
  cycle_ = std::make_unique<VCycle<Number>>(op, kernel, 1, 1, std::move(hooks));
}

ConvergenceHistory distributed_solve(const GlobalOperator<double>& op, KernelKind kernel,
                                     int nranks, std::span<const double> b,
                                     std::span<double> x, const SolverConfig& config,
                                     OwnershipPolicy policy) {
  const int L = op.mesh().finest_level();
  const DistributedLevel fine(op.mesh(), L, nranks, op.dofs_per_cell(), op.basis().size(),
                              policy);
  LinearMap a = [&](std::span<const double> in, std::span<double> out) {
    distributed_apply(op, fine, out, in);
  };
  InnerProduct inner = [&](std::span<const double> u, std::span<const double> v) {
    return fine.dot(u, v);
  };
  if (config.precision == PrecisionMode::Double) {
    const DistributedVCycle<double> mg(op, kernel, nranks, policy);
    LinearMap p = [&](std::span<const double> in, std::span<double> out) {
      mg.apply(in, out);
    };
    return gmres(a, b, x, p, config, inner);
  }
  const GlobalOperator<float> op_f(op.mesh(), op.basis(), op.penalty_factor());
  const DistributedVCycle<float> mg(op_f, kernel, nranks, policy);
  LinearMap p = [&](std::span<const double> in, std::span<double> out) {
    std::vector<float> bf(in.begin(), in.end()), xf(in.size());
    mg.apply(bf, xf);
    std::copy(xf.begin(), xf.end(), out.begin());
  };
  return gmres(a, b, x, p, config, inner);
}

template void distributed_apply<double>(const GlobalOperator<double>&,
                                        const DistributedLevel&, std::span<double>,
                                        std::span<const double>);
template void distributed_apply<float>(const GlobalOperator<float>&,
                                       const DistributedLevel&, std::span<float>,
                                       std::span<const float>);
template void distributed_smooth<double>(const PatchSmoother<double>&,
                                         const DistributedLevel&, std::span<double>,
                                         std::span<const double>, bool);
template void distributed_smooth<float>(const PatchSmoother<float>&,
                                        const DistributedLevel&, std::span<float>,
                                        std::span<const float>, bool);
template class DistributedVCycle<double>;
template class DistributedVCycle<float>;

}  // namespace vpmg
