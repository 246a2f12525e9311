#include "vpmg/partition.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace vpmg {

RankPartition RankPartition::from_owners(const MeshHierarchy& mesh, int level,
                                         int nranks, std::vector<int> owner) {
  if (nranks < 1) throw std::invalid_argument("need at least one rank");
  if (owner.size() != mesh.n_cells(level))
    throw std::invalid_argument("owner map must cover every cell");
  RankPartition p;
  p.nranks_ = nranks;
  p.level_ = level;
  p.owner_ = std::move(owner);
  p.owned_.resize(nranks);
  p.ghosts_.resize(nranks);
  for (std::size_t c = 0; c < p.owner_.size(); ++c) {
    if (p.owner_[c] < 0 || p.owner_[c] >= nranks)
      throw std::invalid_argument("owner rank out of range");
    p.owned_[p.owner_[c]].push_back(c);
  }
  for (int r = 0; r < nranks; ++r) {
    std::set<std::size_t> g;
    for (std::size_t c : p.owned_[r])
      for (int d = 0; d < mesh.dim(); ++d)
        for (int side = 0; side < 2; ++side)
          if (auto nb = mesh.neighbor(level, c, d, side); nb && p.owner_[*nb] != r)
            g.insert(*nb);
    p.ghosts_[r].assign(g.begin(), g.end());
  }
  return p;
}

namespace {

std::vector<int> slab_owners(const MeshHierarchy& mesh, int level, int nranks) {
  const int n = mesh.cells_per_direction(level);
  const int slow = mesh.dim() - 1;
  std::vector<int> owner(mesh.n_cells(level));
  const int active = std::min(nranks, n);
  for (std::size_t c = 0; c < owner.size(); ++c) {
    const int slab = mesh.coordinates(level, c)[slow];
    int r = 0;
    while (r + 1 < active && static_cast<long>(r + 1) * n / active <= slab) ++r;
    owner[c] = r;
  }
  return owner;
}

}  // namespace

RankPartition partition_cells(const MeshHierarchy& mesh, int level, int nranks) {
  const int n = mesh.cells_per_direction(level);
  if (nranks < 1 || nranks > n)
    throw std::invalid_argument("nranks must lie in [1, " + std::to_string(n) +
                                "] on level " + std::to_string(level));
  return RankPartition::from_owners(mesh, level, nranks, slab_owners(mesh, level, nranks));
}

std::string to_string(OwnershipPolicy policy) {
  return policy == OwnershipPolicy::FewestGhosts ? "fewest_ghosts" : "smallest_cell_index";
}

int assign_patch_owner(const VertexPatch& patch, const RankPartition& partition,
                       OwnershipPolicy policy) {
  if (policy == OwnershipPolicy::SmallestCellIndex)
    return partition.owner(*std::min_element(patch.cells.begin(), patch.cells.end()));
  std::map<int, int> count;
  for (std::size_t c : patch.cells) ++count[partition.owner(c)];
  int best = -1, best_count = -1;
  for (const auto& [rank, n] : count)  // ascending rank, so ties keep the lower one
    if (n > best_count) {
      best = rank;
      best_count = n;
    }
  return best;
}

GhostPatchStorage::GhostPatchStorage(const PatchDoFLayout& layout,
                                     std::size_t dofs_per_cell)
    : layout_(layout), dpc_(dofs_per_cell) {}

void GhostPatchStorage::add(const VertexPatch& patch,
                            std::span<const std::size_t> local_cell, bool has_ghost) {
  std::vector<std::size_t> first(patch.cells.size());
  for (std::size_t s = 0; s < first.size(); ++s) first[s] = local_cell[s] * dpc_;
  if (has_ghost) {
    entries_.push_back({true, explicit_.size()});
    std::vector<std::size_t> idx;
    layout_.expand(first, idx);
    explicit_.insert(explicit_.end(), idx.begin(), idx.end());
  } else {
    entries_.push_back({false, compressed_.size()});
    compressed_.insert(compressed_.end(), first.begin(), first.end());
  }
}

void GhostPatchStorage::indices(std::size_t i, std::vector<std::size_t>& out) const {
  const Entry& e = entries_.at(i);
  if (e.ghost) {
    out.assign(explicit_.begin() + e.offset, explicit_.begin() + e.offset + layout_.size());
    return;
  }
  const std::size_t cells = std::size_t{1} << layout_.dim;
  layout_.expand(std::span<const std::size_t>(compressed_.data() + e.offset, cells), out);
}

DistributedLevel::DistributedLevel(const MeshHierarchy& mesh, int level, int nranks,
                                   std::size_t dofs_per_cell, int dofs_1d,
                                   OwnershipPolicy policy)
    : partition_(RankPartition::from_owners(mesh, level, nranks,
                                            slab_owners(mesh, level, nranks))),
      dpc_(dofs_per_cell) {
  build(mesh, dofs_1d, policy);
}

DistributedLevel::DistributedLevel(const RankPartition& partition,
                                   const MeshHierarchy& mesh, std::size_t dofs_per_cell,
                                   int dofs_1d, OwnershipPolicy policy)
    : partition_(partition), dpc_(dofs_per_cell) {
  build(mesh, dofs_1d, policy);
}

void DistributedLevel::build(const MeshHierarchy& mesh, int dofs_1d,
                             OwnershipPolicy policy) {
  const int R = partition_.nranks();
  const int level = partition_.level();
  colors_ = color_patches(enumerate_patches(mesh, level), mesh.dim());
  owned_patches_.assign(R, std::vector<std::vector<std::size_t>>(colors_.size()));

  std::vector<std::set<std::size_t>> extra(R);
  for (std::size_t c = 0; c < colors_.size(); ++c)
    for (std::size_t i = 0; i < colors_[c].patches.size(); ++i) {
      const VertexPatch& p = colors_[c].patches[i];
      const int r = assign_patch_owner(p, partition_, policy);
      owned_patches_[r][c].push_back(i);
      for (std::size_t cell : p.cells)
        if (partition_.owner(cell) != r) extra[r].insert(cell);
    }

  cells_.assign(R, {});
  local_of_.assign(R, std::vector<long>(partition_.n_cells(), -1));
  for (int r = 0; r < R; ++r) {
    std::set<std::size_t> ghosts(partition_.ghost_cells(r).begin(),
                                 partition_.ghost_cells(r).end());
    ghosts.insert(extra[r].begin(), extra[r].end());
    cells_[r] = partition_.owned_cells(r);
    cells_[r].insert(cells_[r].end(), ghosts.begin(), ghosts.end());
    for (std::size_t i = 0; i < cells_[r].size(); ++i) local_of_[r][cells_[r][i]] = long(i);
  }

  const PatchDoFLayout layout(mesh.dim(), dofs_1d);
  storage_.assign(R, std::vector<GhostPatchStorage>(colors_.size(),
                                                    GhostPatchStorage(layout, dpc_)));
  for (int r = 0; r < R; ++r)
    for (std::size_t c = 0; c < colors_.size(); ++c)
      for (std::size_t i : owned_patches_[r][c]) {
        const VertexPatch& p = colors_[c].patches[i];
        std::vector<std::size_t> local(p.cells.size());
        bool ghost = false;
        for (std::size_t s = 0; s < p.cells.size(); ++s) {
          local[s] = static_cast<std::size_t>(local_of_[r][p.cells[s]]);
          ghost = ghost || partition_.owner(p.cells[s]) != r;
        }
        storage_[r][c].add(p, local, ghost);
      }
}

long DistributedLevel::local_cell(int rank, std::size_t cell) const {
  return local_of_.at(rank).at(cell);
}

template <typename Number>
DistributedLevel::Locals<Number> DistributedLevel::distribute(
    std::span<const Number> global) const {
  if (global.size() != partition_.n_cells() * dpc_)
    throw std::invalid_argument("global vector length mismatch");
  Locals<Number> locals(nranks());
  for (int r = 0; r < nranks(); ++r) {
    locals[r].assign(local_size(r), Number(0));
    for (std::size_t i = 0; i < n_owned_cells(r); ++i)
      std::copy_n(global.data() + cells_[r][i] * dpc_, dpc_, locals[r].data() + i * dpc_);
  }
  update_ghosts(locals);
  return locals;
}

template <typename Number>
void DistributedLevel::gather_owned(const Locals<Number>& locals,
                                    std::span<Number> global) const {
  for (int r = 0; r < nranks(); ++r)
    for (std::size_t i = 0; i < n_owned_cells(r); ++i)
      std::copy_n(locals[r].data() + i * dpc_, dpc_, global.data() + cells_[r][i] * dpc_);
}

template <typename Number>
void DistributedLevel::update_ghosts(Locals<Number>& locals) const {
  for (int r = 0; r < nranks(); ++r)
    for (std::size_t i = n_owned_cells(r); i < cells_[r].size(); ++i) {
      const std::size_t cell = cells_[r][i];
      const int o = partition_.owner(cell);
      const std::size_t src = static_cast<std::size_t>(local_of_[o][cell]) * dpc_;
      std::copy_n(locals[o].data() + src, dpc_, locals[r].data() + i * dpc_);
    }
}

template <typename Number>
void DistributedLevel::compress_add(Locals<Number>& contrib, Locals<Number>& target) const {
  for (int r = 0; r < nranks(); ++r) {
    const std::size_t owned = n_owned_cells(r) * dpc_;
    for (std::size_t q = 0; q < owned; ++q) target[r][q] += contrib[r][q];
  }
  for (int r = 0; r < nranks(); ++r)
    for (std::size_t i = n_owned_cells(r); i < cells_[r].size(); ++i) {
      const std::size_t cell = cells_[r][i];
      const int o = partition_.owner(cell);
      Number* dst = target[o].data() + static_cast<std::size_t>(local_of_[o][cell]) * dpc_;
      const Number* src = contrib[r].data() + i * dpc_;
      for (std::size_t q = 0; q < dpc_; ++q) dst[q] += src[q];
    }
  for (auto& v : contrib) std::fill(v.begin(), v.end(), Number(0));
}

template <typename Number>
void DistributedLevel::check_ghosts(const Locals<Number>& locals) const {
  for (int r = 0; r < nranks(); ++r)
    for (std::size_t i = n_owned_cells(r); i < cells_[r].size(); ++i) {
      const std::size_t cell = cells_[r][i];
      const int o = partition_.owner(cell);
      const Number* a = locals[o].data() + static_cast<std::size_t>(local_of_[o][cell]) * dpc_;
      const Number* g = locals[r].data() + i * dpc_;
      Number sa = 0, sg = 0;
      for (std::size_t q = 0; q < dpc_; ++q) {
        sa += a[q] * Number(q + 1);
        sg += g[q] * Number(q + 1);
      }
      if (sa != sg)
        throw std::logic_error("inconsistent ghost state on rank " + std::to_string(r) +
                               " for cell " + std::to_string(cell));
    }
}

double DistributedLevel::dot(std::span<const double> a, std::span<const double> b) const {
  double total = 0.0;
  for (int r = 0; r < nranks(); ++r) {
    double partial = 0.0;
    for (std::size_t cell : partition_.owned_cells(r))
      for (std::size_t q = cell * dpc_; q < (cell + 1) * dpc_; ++q) partial += a[q] * b[q];
    total += partial;
  }
  return total;
}

#define VPMG_INSTANTIATE(N)                                                              \
  template DistributedLevel::Locals<N> DistributedLevel::distribute<N>(                  \
      std::span<const N>) const;                                                         \
  template void DistributedLevel::gather_owned<N>(const Locals<N>&, std::span<N>) const; \
  template void DistributedLevel::update_ghosts<N>(Locals<N>&) const;                    \
  template void DistributedLevel::compress_add<N>(Locals<N>&, Locals<N>&) const;         \
  template void DistributedLevel::check_ghosts<N>(const Locals<N>&) const;

VPMG_INSTANTIATE(double)
VPMG_INSTANTIATE(float)
#undef VPMG_INSTANTIATE

}  // namespace vpmg
