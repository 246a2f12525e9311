#pragma once

/// \file partition.hpp
/// In-process simulation of a distributed run. Every rank keeps a compact
/// local vector (owned cells first, then ghost cells, each cell's DoFs
/// contiguous). Exchanges are copies between these vectors:
///
///   update_ghosts  owner values -> ghost copies
///   compress_add   ghost contributions -> owner, then ghosts cleared
///
/// Ghost cells of a rank are the face neighbors of its owned cells plus all
/// cells of the patches it owns.

#include "vpmg/mesh.hpp"
#include "vpmg/multigrid.hpp"
#include "vpmg/krylov.hpp"
#include "vpmg/patch_layout.hpp"

#include <memory>
#include <span>
#include <vector>

namespace vpmg {

class RankPartition {
 public:
  /// Arbitrary owner map; ranks without cells are allowed.
  static RankPartition from_owners(const MeshHierarchy& mesh, int level, int nranks,
                                   std::vector<int> owner);

  int nranks() const { return nranks_; }
  int level() const { return level_; }
  std::size_t n_cells() const { return owner_.size(); }
  int owner(std::size_t cell) const { return owner_.at(cell); }
  const std::vector<std::size_t>& owned_cells(int rank) const { return owned_.at(rank); }
  /// Face neighbors of owned cells that the rank does not own.
  const std::vector<std::size_t>& ghost_cells(int rank) const { return ghosts_.at(rank); }

 private:
  int nranks_ = 1;
  int level_ = 0;
  std::vector<int> owner_;
  std::vector<std::vector<std::size_t>> owned_, ghosts_;
};

/// Contiguous slabs along the slowest axis, rank r owning slabs
/// [r n / R, (r+1) n / R). Requires 1 <= nranks <= cells per direction.
RankPartition partition_cells(const MeshHierarchy& mesh, int level, int nranks);

enum class OwnershipPolicy { FewestGhosts, SmallestCellIndex };

std::string to_string(OwnershipPolicy policy);

/// FewestGhosts: the rank owning most cells of the patch, ties to the lower
/// rank. SmallestCellIndex: the owner of the patch cell with the smallest
/// linear index.
int assign_patch_owner(const VertexPatch& patch, const RankPartition& partition,
                       OwnershipPolicy policy);

/// Gather indices of the patches of one rank in its local numbering. Patches
/// made of owned cells keep the first DoF of each cell only; patches with a
/// ghost cell store every index.
class GhostPatchStorage {
 public:
  GhostPatchStorage() = default;
  GhostPatchStorage(const PatchDoFLayout& layout, std::size_t dofs_per_cell);

  /// `local_cell` maps a patch cell to its local cell position.
  void add(const VertexPatch& patch, std::span<const std::size_t> local_cell,
           bool has_ghost);

  std::size_t size() const { return entries_.size(); }
  bool is_ghost_patch(std::size_t i) const { return entries_.at(i).ghost; }
  void indices(std::size_t i, std::vector<std::size_t>& out) const;
  std::size_t stored_indices() const { return compressed_.size() + explicit_.size(); }

 private:
  struct Entry {
    bool ghost = false;
    std::size_t offset = 0;
  };
  PatchDoFLayout layout_;
  std::size_t dpc_ = 1;
  std::vector<Entry> entries_;
  std::vector<std::size_t> compressed_;
  std::vector<std::size_t> explicit_;
};

/// Per-level rank data: local numbering, patch ownership and storage.
class DistributedLevel {
 public:
  /// `nranks` may exceed the number of slabs of a coarse level; the extra
  /// ranks then stay idle on that level.
  DistributedLevel(const MeshHierarchy& mesh, int level, int nranks,
                   std::size_t dofs_per_cell, int dofs_1d, OwnershipPolicy policy);
  DistributedLevel(const RankPartition& partition, const MeshHierarchy& mesh,
                   std::size_t dofs_per_cell, int dofs_1d, OwnershipPolicy policy);

  const RankPartition& partition() const { return partition_; }
  int nranks() const { return partition_.nranks(); }
  int level() const { return partition_.level(); }
  std::size_t dofs_per_cell() const { return dpc_; }

  std::size_t n_owned_cells(int rank) const { return partition_.owned_cells(rank).size(); }
  /// Owned then ghost cells of a rank, global cell indices.
  const std::vector<std::size_t>& local_cells(int rank) const { return cells_.at(rank); }
  std::size_t local_size(int rank) const { return cells_.at(rank).size() * dpc_; }
  /// Local cell position of a global cell on a rank, or -1.
  long local_cell(int rank, std::size_t cell) const;

  /// Patch indices (into the level's color class) owned by a rank.
  const std::vector<std::size_t>& owned_patches(int rank, int color) const {
    return owned_patches_.at(rank).at(color);
  }
  const GhostPatchStorage& storage(int rank, int color) const {
    return storage_.at(rank).at(color);
  }
  const std::vector<ColorClass>& colors() const { return colors_; }

  template <typename Number>
  using Locals = std::vector<std::vector<Number>>;

  /// Owned values from a global vector, ghosts exchanged.
  template <typename Number>
  Locals<Number> distribute(std::span<const Number> global) const;
  template <typename Number>
  void gather_owned(const Locals<Number>& locals, std::span<Number> global) const;
  template <typename Number>
  void update_ghosts(Locals<Number>& locals) const;
  /// Adds ghost entries of `contrib` into the owners' entries of `target`
  /// and owned entries of `contrib` into `target`; clears `contrib`.
  template <typename Number>
  void compress_add(Locals<Number>& contrib, Locals<Number>& target) const;
  /// Throws std::logic_error if a ghost copy differs from its owner.
  template <typename Number>
  void check_ghosts(const Locals<Number>& locals) const;

  /// Rank-ordered sum of per-rank partial dot products over owned DoFs of
  /// global vectors.
  double dot(std::span<const double> a, std::span<const double> b) const;

 private:
  void build(const MeshHierarchy& mesh, int dofs_1d, OwnershipPolicy policy);

  RankPartition partition_;
  std::size_t dpc_;
  std::vector<std::vector<std::size_t>> cells_;
  std::vector<std::vector<long>> local_of_;
  std::vector<ColorClass> colors_;
  std::vector<std::vector<std::vector<std::size_t>>> owned_patches_;
  std::vector<std::vector<GhostPatchStorage>> storage_;
};

/// dst = A src with every rank computing the rows of its owned cells from
/// its local vector only.
template <typename Number>
void distributed_apply(const GlobalOperator<Number>& op, const DistributedLevel& dist,
                       std::span<Number> dst, std::span<const Number> src);

/// One smoothing sweep where every rank processes its owned patches on its
/// local vectors; corrections on ghost DoFs go through a temporary vector
/// and compress_add, followed by a ghost update, after each color.
template <typename Number>
void distributed_smooth(const PatchSmoother<Number>& smoother,
                        const DistributedLevel& dist, std::span<Number> x,
                        std::span<const Number> b, bool debug = false);

/// V-cycle whose operator applications and smoothing run on the simulated
/// ranks. Transfers and the coarse solve are cell-local and replicated.
template <typename Number>
class DistributedVCycle {
 public:
  DistributedVCycle(const GlobalOperator<Number>& op, KernelKind kernel, int nranks,
                    OwnershipPolicy policy = OwnershipPolicy::FewestGhosts);
  DistributedVCycle(const DistributedVCycle&) = delete;
  DistributedVCycle& operator=(const DistributedVCycle&) = delete;

  const DistributedLevel& level(int l) const { return *levels_.at(l); }
  void apply(std::span<const Number> b, std::span<Number> x) const { cycle_->apply(b, x); }

 private:
  std::vector<std::unique_ptr<DistributedLevel>> levels_;
  std::unique_ptr<VCycle<Number>> cycle_;
};

/// GMRES on the finest level with distributed operator, preconditioner and
/// inner products.
ConvergenceHistory distributed_solve(const GlobalOperator<double>& op, KernelKind kernel,
                                     int nranks, std::span<const double> b,
                                     std::span<double> x, const SolverConfig& config,
                                     OwnershipPolicy policy = OwnershipPolicy::FewestGhosts);

}  // namespace vpmg
