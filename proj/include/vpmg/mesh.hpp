#pragma once

/// \file mesh.hpp
/// Nested Cartesian mesh hierarchy on the unit square/cube, vertex patches
/// and their non-overlapping coloring.
///
/// Level 0 is the regular refinement of the unit cell into 2^dim cells, so
/// level l has 2^(l+1) cells per direction. Cells are numbered
/// lexicographically with x running fastest.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace vpmg {

using Coords = std::array<int, 3>;

struct CellIndex {
  int level = 0;
  Coords coords{0, 0, 0};
};

class MeshHierarchy {
 public:
  MeshHierarchy(int dim, int finest_level);

  int dim() const { return dim_; }
  int finest_level() const { return finest_level_; }
  int n_levels() const { return finest_level_ + 1; }

  int cells_per_direction(int level) const;
  double cell_size(int level) const;
  std::size_t n_cells(int level) const;

  std::size_t linear_index(int level, const Coords& c) const;
  std::size_t linear_index(const CellIndex& cell) const {
    return linear_index(cell.level, cell.coords);
  }
  Coords coordinates(int level, std::size_t index) const;

  /// Children of a level-l cell on level l+1, in lexicographic order of
  /// their position inside the parent.
  std::vector<std::size_t> children(int level, std::size_t cell) const;
  std::size_t parent(int level, std::size_t cell) const;

  /// Face neighbor in direction `dir`; side 0 is the lower face, 1 the upper.
  /// Empty on the domain boundary.
  std::optional<std::size_t> neighbor(int level, std::size_t cell, int dir,
                                      int side) const;

 private:
  void check_level(int level) const;

  int dim_;
  int finest_level_;
};

MeshHierarchy build_hierarchy(int dim, int finest_level);

/// All cells sharing one interior vertex.
///
/// `cells` holds the 2^dim cells ordered by the position of the shared
/// vertex: the cell whose most-positive corner is the vertex comes first,
/// the others follow lexicographically (x fastest). Equivalently the
/// lexicographic order of the 2x2(x2) block starting at `lowest`.
struct VertexPatch {
  int level = 0;
  Coords vertex{0, 0, 0};
  Coords lowest{0, 0, 0};
  std::vector<std::size_t> cells;

  /// True if the patch touches the domain boundary at the lower (side 0) or
  /// upper (side 1) end of direction `dir`.
  std::array<bool, 2> at_boundary(int dir, int cells_per_direction) const {
    return {lowest[dir] == 0, lowest[dir] + 2 == cells_per_direction};
  }
};

std::vector<VertexPatch> enumerate_patches(const MeshHierarchy& mesh, int level);

/// Parity color: sum_i (lowest_i mod 2) 2^i.
int patch_color(const VertexPatch& patch, int dim);

struct ColorClass {
  int color = 0;
  std::vector<VertexPatch> patches;
};

/// Partition of a patch set into 2^dim cell-disjoint classes.
std::vector<ColorClass> color_patches(std::span<const VertexPatch> patches,
                                      int dim);

}  // namespace vpmg
