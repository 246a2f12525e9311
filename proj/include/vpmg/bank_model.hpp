#pragma once

/// \file bank_model.hpp
/// Instruction-level model of banked scratchpad reads during the patch
/// tensor contractions.
///
/// Thread model: a 2D block of n x n threads, n = 2(k+1) patch points per
/// direction, thread t = row * n + col; 3D patches loop over z-slices and
/// keep the z-pencil in registers, so only the x and y contractions touch
/// the scratchpad. Each warp of 32 consecutive threads issues one request
/// per summation step; requests of 8-byte words are served in two halves of
/// 16 lanes, 4-byte words by all 32 lanes at once.
///
///   x phase  thread (r,c) reads element (s, c, j)   strided by n
///   y phase  thread (r,c) reads element (s, j, c)   contiguous
///
/// Element (s, row, col) is stored at s*n*n + row*n + col (Basic) or at
/// s*n*n + row*n + (col + sigma[row] + s) mod n (ConflictFree).

#include <cstdint>
#include <string>
#include <vector>

namespace vpmg {

struct BankConfig {
  int num_banks = 16;
  int word_bytes = 8;

  static BankConfig double_precision() { return {16, 8}; }
  static BankConfig single_precision() { return {32, 4}; }
  /// Lanes served by one access.
  int lanes_per_access() const { return num_banks < 32 ? num_banks : 32; }
};

struct Access {
  std::string phase;
  std::vector<std::uint64_t> addresses;  // one word address per active lane
};

struct AccessTrace {
  std::vector<Access> accesses;
};

enum class LayoutKind { Basic, ConflictFree };

std::string to_string(LayoutKind layout);
LayoutKind layout_from_string(const std::string& name);

/// Max over banks of the number of distinct addresses in one access.
int wavefronts(const std::vector<std::uint64_t>& addresses, const BankConfig& config);

/// Sum over accesses of wavefronts - 1.
std::uint64_t count_excess_wavefronts(const AccessTrace& trace, const BankConfig& config);

struct PhaseCount {
  std::string phase;
  std::uint64_t wavefronts = 0;
  std::uint64_t excess = 0;
};

/// Totals per phase name in order of first appearance.
std::vector<PhaseCount> count_by_phase(const AccessTrace& trace, const BankConfig& config);

/// Row offsets sigma of the conflict-free layout. sigma[c] = c where that
/// is conflict-free, otherwise the first assignment found by a
/// deterministic backtracking search.
std::vector<int> row_offsets(int degree, const BankConfig& config);

/// Trace of all x and y contraction reads of one patch. Requires
/// 1 <= degree <= 7 and dim in {2,3}.
AccessTrace contraction_trace(int degree, int dim, LayoutKind layout,
                              const BankConfig& config);

}  // namespace vpmg
