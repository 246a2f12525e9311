#pragma once

/// \file patch_layout.hpp
/// Renumbering between the cell-wise lexicographic global layout and the
/// patch-lexicographic layout used by tensor operations on a vertex patch.

#include <cstddef>
#include <span>
#include <vector>

namespace vpmg {

/// Patch-lexicographic index p (x fastest over 2(k+1) points per direction)
/// maps to (slot of the cell inside the patch, local DoF index in the cell).
struct PatchDoFLayout {
  int dim = 0;
  int n1 = 0;  // DoFs per direction and cell
  std::vector<int> cell_slot;
  std::vector<int> local_index;

  PatchDoFLayout() = default;
  PatchDoFLayout(int dim, int dofs_1d);

  int dofs_per_direction() const { return 2 * n1; }
  std::size_t size() const { return cell_slot.size(); }

  /// Global index list of a patch from the first DoF of each of its cells
  /// (the compressed storage scheme).
  void expand(std::span<const std::size_t> first_dofs,
              std::vector<std::size_t>& indices) const {
    indices.resize(size());
    for (std::size_t p = 0; p < size(); ++p)
      indices[p] = first_dofs[cell_slot[p]] + local_index[p];
  }

  template <typename Number>
  void gather(std::span<const std::size_t> first_dofs, const Number* global,
              Number* patch) const {
    for (std::size_t p = 0; p < size(); ++p)
      patch[p] = global[first_dofs[cell_slot[p]] + local_index[p]];
  }

  template <typename Number>
  void scatter_add(std::span<const std::size_t> first_dofs, const Number* patch,
                   Number* global) const {
    for (std::size_t p = 0; p < size(); ++p)
      global[first_dofs[cell_slot[p]] + local_index[p]] += patch[p];
  }
};

inline PatchDoFLayout::PatchDoFLayout(int d, int dofs_1d) : dim(d), n1(dofs_1d) {
  const int np = 2 * n1;
  std::size_t total = 1;
  for (int e = 0; e < dim; ++e) total *= np;
  cell_slot.resize(total);
  local_index.resize(total);
  for (std::size_t p = 0; p < total; ++p) {
    std::size_t rest = p, stride = 1;
    int slot = 0;
    int local = 0;
    for (int e = 0; e < dim; ++e) {
      const int coord = static_cast<int>(rest % np);
      rest /= np;
      slot |= (coord / n1) << e;
      local += static_cast<int>(stride) * (coord % n1);
      stride *= n1;
    }
    cell_slot[p] = slot;
    local_index[p] = local;
  }
}

}  // namespace vpmg
