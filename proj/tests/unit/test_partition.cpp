#include "doctest.h"

#include "vpmg/partition.hpp"

#include <random>

using namespace vpmg;

namespace {

std::vector<double> random_vector(std::size_t n, unsigned seed) {
  std::mt19937 g(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> v(n);
  for (auto& x : v) x = u(g);
  return v;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_CASE("slab partition") {
  const MeshHierarchy mesh(3, 2);
  const auto p = partition_cells(mesh, 2, 3);
  CHECK(p.owned_cells(0).size() == 2 * 64);
  CHECK(p.owned_cells(1).size() == 3 * 64);
  CHECK(p.owned_cells(2).size() == 3 * 64);
  CHECK(p.ghost_cells(0).size() == 64);
  CHECK(p.ghost_cells(1).size() == 128);
  CHECK_THROWS_AS(partition_cells(mesh, 2, 9), std::invalid_argument);
  CHECK_THROWS_AS(partition_cells(mesh, 2, 0), std::invalid_argument);
}

TEST_CASE("patch ownership policies") {
  const MeshHierarchy mesh(2, 1);
  const auto patches = enumerate_patches(mesh, 1);
  const VertexPatch& patch = patches.front();
  std::vector<int> owner(mesh.n_cells(1), 0);
  owner[patch.cells[0]] = 1;  // the smallest cell index sits on rank 1
  const auto p = RankPartition::from_owners(mesh, 1, 2, owner);
  CHECK(assign_patch_owner(patch, p, OwnershipPolicy::FewestGhosts) == 0);
  CHECK(assign_patch_owner(patch, p, OwnershipPolicy::SmallestCellIndex) == 1);

  // two cells each: the lower rank wins
  const auto slabs = partition_cells(mesh, 1, 2);
  for (const auto& q : patches)
    if (q.lowest[1] == 1) CHECK(assign_patch_owner(q, slabs, OwnershipPolicy::FewestGhosts) == 0);
  CHECK_THROWS_AS(RankPartition::from_owners(mesh, 1, 2, std::vector<int>(3)),
                  std::invalid_argument);
}

TEST_CASE("ghost patch storage") {
  const MeshHierarchy mesh(2, 1);
  const int n1 = 3;
  const std::size_t dpc = 9;
  const DistributedLevel dist(mesh, 1, 2, dpc, n1, OwnershipPolicy::FewestGhosts);
  const PatchDoFLayout layout(2, n1);
  std::size_t ghost = 0, total = 0;
  for (int r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < dist.colors().size(); ++c) {
      const auto& s = dist.storage(r, int(c));
      std::size_t expect = 0;
      for (std::size_t i = 0; i < s.size(); ++i) {
        expect += s.is_ghost_patch(i) ? layout.size() : 4;
        ghost += s.is_ghost_patch(i);
        std::vector<std::size_t> idx;
        s.indices(i, idx);
        // indices agree with the local cells of the patch
        const auto& patch = dist.colors()[c].patches[dist.owned_patches(r, int(c))[i]];
        std::vector<std::size_t> first(4);
        for (int q = 0; q < 4; ++q)
          first[q] = std::size_t(dist.local_cell(r, patch.cells[q])) * dpc;
        std::vector<std::size_t> ref;
        layout.expand(first, ref);
        CHECK(idx == ref);
      }
      total += s.size();
      CHECK(s.stored_indices() == expect);
    }
  CHECK(total == 9);
  CHECK(ghost == 3);  // the row of patches straddling the slab boundary
}

TEST_CASE("ghost updates and consistency check") {
  const MeshHierarchy mesh(2, 2);
  const DistributedLevel dist(mesh, 2, 3, 4, 2, OwnershipPolicy::FewestGhosts);
  const auto g = random_vector(mesh.n_cells(2) * 4, 1);
  auto locals = dist.distribute<double>(g);
  CHECK_NOTHROW(dist.check_ghosts(locals));
  std::vector<double> back(g.size());
  dist.gather_owned<double>(locals, back);
  CHECK(back == g);
  locals[1].back() += 1.0;  // a ghost entry
  CHECK_THROWS_AS(dist.check_ghosts(locals), std::logic_error);
  CHECK(dist.dot(g, g) == doctest::Approx(dot(g, g)).epsilon(1e-14));
}

TEST_CASE("compress_add sends ghost contributions to owners") {
  const MeshHierarchy mesh(2, 1);
  const DistributedLevel dist(mesh, 1, 2, 1, 1, OwnershipPolicy::FewestGhosts);
  DistributedLevel::Locals<double> target(2), contrib(2);
  for (int r = 0; r < 2; ++r) {
    target[r].assign(dist.local_size(r), 0.0);
    contrib[r].assign(dist.local_size(r), 1.0);
  }
  dist.compress_add<double>(contrib, target);
  std::vector<double> global(mesh.n_cells(1));
  dist.gather_owned<double>(target, global);
  // each cell gets 1 from its owner plus 1 from every rank holding it as ghost
  for (std::size_t c = 0; c < global.size(); ++c) {
    const auto y = mesh.coordinates(1, c)[1];
    CHECK(global[c] == (y == 1 || y == 2 ? 2.0 : 1.0));
  }
  for (const auto& v : contrib)
    for (double x : v) CHECK(x == 0.0);
}

TEST_CASE("distributed operator and smoother match serial runs") {
  for (KernelKind kernel : {KernelKind::Full, KernelKind::Dirichlet, KernelKind::Clamped})
    for (int ranks : {1, 2, 3, 4}) {
      CAPTURE(to_string(kernel));
      CAPTURE(ranks);
      const MeshHierarchy mesh(3, 1);
      const GlobalOperator<double> op(mesh, make_basis(basis_for(kernel), 3));
      const DistributedLevel dist(mesh, 1, ranks, op.dofs_per_cell(), op.basis().size(),
                                  OwnershipPolicy::FewestGhosts);
      const std::size_t n = op.n_dofs(1);
      const auto x = random_vector(n, 3), b = random_vector(n, 4);
      std::vector<double> y1(n), y2(n);
      op.vmult(1, y1, x);
      distributed_apply<double>(op, dist, y2, x);
      CHECK(max_diff(y1, y2) <= 1e-13);

      const PatchSmoother<double> sm(op, 1, kernel);
      auto s1 = x, s2 = x;
      sm.smooth(s1, b);
      distributed_smooth<double>(sm, dist, s2, b, true);
      CHECK(max_diff(s1, s2) <= 1e-12);
    }
}

TEST_CASE("distributed solve matches the serial solve") {
  const MeshHierarchy mesh(2, 3);
  const GlobalOperator<double> op(mesh, make_basis(BasisKind::Lagrange, 3));
  const auto b = assemble_rhs_constant(mesh, 3, op.basis());
  std::vector<double> x1(b.size()), x2(b.size());
  const SolverConfig config;
  const auto h1 = distributed_solve(op, KernelKind::Dirichlet, 1, b, x1, config);
  for (auto policy : {OwnershipPolicy::FewestGhosts, OwnershipPolicy::SmallestCellIndex}) {
    const auto h3 = distributed_solve(op, KernelKind::Dirichlet, 3, b, x2, config, policy);
    CHECK(h1.iterations == h3.iterations);
    CHECK(max_diff(x1, x2) <= 1e-12 * std::sqrt(dot(x1, x1)));
  }
}
