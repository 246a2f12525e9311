#include "vpmg/mesh.hpp"

#include <stdexcept>
#include <string>

namespace vpmg {

MeshHierarchy::MeshHierarchy(int dim, int finest_level)
    : dim_(dim), finest_level_(finest_level) {
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("mesh dimension must be 2 or 3, got " +
                                std::to_string(dim));
  if (finest_level < 0)
    throw std::invalid_argument("finest level must be non-negative");
  if ((finest_level + 1) * dim > 60)
    throw std::invalid_argument("mesh level too large");
}

void MeshHierarchy::check_level(int level) const {
  if (level < 0 || level > finest_level_)
    throw std::out_of_range("level " + std::to_string(level) +
                            " outside hierarchy");
}

int MeshHierarchy::cells_per_direction(int level) const {
  check_level(level);
  return 1 << (level + 1);
}

double MeshHierarchy::cell_size(int level) const {
  return 1.0 / cells_per_direction(level);
}

std::size_t MeshHierarchy::n_cells(int level) const {
  check_level(level);
  return std::size_t{1} << ((level + 1) * dim_);
}

std::size_t MeshHierarchy::linear_index(int level, const Coords& c) const {
  const std::size_t n = cells_per_direction(level);
  std::size_t index = 0;
  for (int d = dim_ - 1; d >= 0; --d) index = index * n + c[d];
  return index;
}

Coords MeshHierarchy::coordinates(int level, std::size_t index) const {
  const std::size_t n = cells_per_direction(level);
  Coords c{0, 0, 0};
  for (int d = 0; d < dim_; ++d) {
    c[d] = static_cast<int>(index % n);
    index /= n;
  }
  return c;
}

std::vector<std::size_t> MeshHierarchy::children(int level,
                                                 std::size_t cell) const {
  if (level >= finest_level_)
    throw std::out_of_range("finest level cells have no children");
  const Coords c = coordinates(level, cell);
  std::vector<std::size_t> result;
  result.reserve(std::size_t{1} << dim_);
  for (int child = 0; child < (1 << dim_); ++child) {
    Coords f{0, 0, 0};
    for (int d = 0; d < dim_; ++d) f[d] = 2 * c[d] + ((child >> d) & 1);
    result.push_back(linear_index(level + 1, f));
  }
  return result;
}

std::size_t MeshHierarchy::parent(int level, std::size_t cell) const {
  if (level <= 0) throw std::out_of_range("level 0 cells have no parent");
  Coords c = coordinates(level, cell);
  for (int d = 0; d < dim_; ++d) c[d] /= 2;
  return linear_index(level - 1, c);
}

std::optional<std::size_t> MeshHierarchy::neighbor(int level, std::size_t cell,
                                                   int dir, int side) const {
  Coords c = coordinates(level, cell);
  c[dir] += side == 0 ? -1 : 1;
  if (c[dir] < 0 || c[dir] >= cells_per_direction(level)) return std::nullopt;
  return linear_index(level, c);
}

MeshHierarchy build_hierarchy(int dim, int finest_level) {
  return MeshHierarchy(dim, finest_level);
}

std::vector<VertexPatch> enumerate_patches(const MeshHierarchy& mesh,
                                           int level) {
  const int dim = mesh.dim();
  const int n = mesh.cells_per_direction(level);
  const int per_dir = n - 1;
  std::size_t count = 1;
  for (int d = 0; d < dim; ++d) count *= per_dir;

  std::vector<VertexPatch> patches;
  patches.reserve(count);
  for (std::size_t p = 0; p < count; ++p) {
    VertexPatch patch;
    patch.level = level;
    std::size_t rest = p;
    for (int d = 0; d < dim; ++d) {
      patch.lowest[d] = static_cast<int>(rest % per_dir);
      patch.vertex[d] = patch.lowest[d] + 1;
      rest /= per_dir;
    }
    patch.cells.reserve(std::size_t{1} << dim);
    for (int local = 0; local < (1 << dim); ++local) {
      Coords c{0, 0, 0};
      for (int d = 0; d < dim; ++d) c[d] = patch.lowest[d] + ((local >> d) & 1);
      patch.cells.push_back(mesh.linear_index(level, c));
    }
    patches.push_back(std::move(patch));
  }
  return patches;
}

int patch_color(const VertexPatch& patch, int dim) {
  int color = 0;
  for (int d = 0; d < dim; ++d) color |= (patch.lowest[d] & 1) << d;
  return color;
}

std::vector<ColorClass> color_patches(std::span<const VertexPatch> patches,
                                      int dim) {
  std::vector<ColorClass> classes(std::size_t{1} << dim);
  for (std::size_t c = 0; c < classes.size(); ++c)
    classes[c].color = static_cast<int>(c);
  for (const auto& patch : patches)
    classes[patch_color(patch, dim)].patches.push_back(patch);
  return classes;
}

}  // namespace vpmg
