#include "doctest.h"

#include "vpmg/mesh.hpp"

#include <algorithm>
#include <set>

using namespace vpmg;

TEST_CASE("level sizes") {
  const MeshHierarchy m(3, 2);
  CHECK(m.n_levels() == 3);
  CHECK(m.cells_per_direction(0) == 2);
  CHECK(m.cells_per_direction(2) == 8);
  CHECK(m.n_cells(2) == 512);
  CHECK(m.cell_size(1) == doctest::Approx(0.25));
  CHECK_THROWS(m.n_cells(3));
}

TEST_CASE("lexicographic numbering, x fastest") {
  const MeshHierarchy m(2, 1);
  CHECK(m.linear_index(1, {1, 2, 0}) == 9);
  const Coords c = m.coordinates(1, 9);
  CHECK(c[0] == 1);
  CHECK(c[1] == 2);
}

TEST_CASE("children and parent are inverse") {
  const MeshHierarchy m(3, 2);
  for (std::size_t c = 0; c < m.n_cells(1); ++c) {
    const auto ch = m.children(1, c);
    REQUIRE(ch.size() == 8);
    for (std::size_t f : ch) CHECK(m.parent(2, f) == c);
  }
}

TEST_CASE("neighbors") {
  const MeshHierarchy m(2, 0);
  CHECK(!m.neighbor(0, 0, 0, 0).has_value());
  CHECK(m.neighbor(0, 0, 0, 1).value() == 1);
  CHECK(m.neighbor(0, 0, 1, 1).value() == 2);
  CHECK(!m.neighbor(0, 3, 1, 1).has_value());
}

TEST_CASE("patches, level 1 in 2D") {
  const MeshHierarchy m(2, 1);
  const auto patches = enumerate_patches(m, 1);
  CHECK(patches.size() == 9);
  for (const auto& p : patches) {
    REQUIRE(p.cells.size() == 4);
    // 2x2 block, lexicographic from the lowest corner
    CHECK(p.cells[0] == m.linear_index(1, p.lowest));
    CHECK(p.cells[1] == p.cells[0] + 1);
    CHECK(p.cells[2] == p.cells[0] + 4);
    CHECK(p.cells[3] == p.cells[0] + 5);
  }
}

TEST_CASE("coloring: sizes and disjointness") {
  const MeshHierarchy m(2, 1);
  const auto colors = color_patches(enumerate_patches(m, 1), 2);
  REQUIRE(colors.size() == 4);
  std::vector<std::size_t> sizes;
  for (const auto& c : colors) sizes.push_back(c.patches.size());
  CHECK(sizes == std::vector<std::size_t>{4, 2, 2, 1});
  for (const auto& c : colors) {
    std::set<std::size_t> seen;
    for (const auto& p : c.patches)
      for (std::size_t cell : p.cells) CHECK(seen.insert(cell).second);
  }
}

TEST_CASE("3D level 0 is a single patch") {
  const MeshHierarchy m(3, 0);
  const auto colors = color_patches(enumerate_patches(m, 0), 3);
  std::size_t total = 0;
  for (const auto& c : colors) total += c.patches.size();
  CHECK(total == 1);
}
