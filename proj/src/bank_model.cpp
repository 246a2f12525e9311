#include "vpmg/bank_model.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace vpmg {

std::string to_string(LayoutKind layout) {
  return layout == LayoutKind::Basic ? "basic" : "conflict_free";
}

LayoutKind layout_from_string(const std::string& name) {
  if (name == "basic") return LayoutKind::Basic;
  if (name == "conflict_free") return LayoutKind::ConflictFree;
  throw std::invalid_argument("unknown layout '" + name + "'");
}

int wavefronts(const std::vector<std::uint64_t>& addresses, const BankConfig& config) {
  if (config.num_banks <= 0) throw std::invalid_argument("bank count must be positive");
  std::map<std::uint64_t, std::set<std::uint64_t>> per_bank;
  for (std::uint64_t a : addresses) per_bank[a % config.num_banks].insert(a);
  std::size_t w = 0;
  for (const auto& [bank, set] : per_bank) w = std::max(w, set.size());
  return static_cast<int>(w);
}

std::uint64_t count_excess_wavefronts(const AccessTrace& trace,
                                      const BankConfig& config) {
  std::uint64_t excess = 0;
  for (const Access& a : trace.accesses) {
    const int w = wavefronts(a.addresses, config);
    if (w > 1) excess += w - 1;
  }
  return excess;
}

std::vector<PhaseCount> count_by_phase(const AccessTrace& trace,
                                       const BankConfig& config) {
  std::vector<PhaseCount> out;
  std::map<std::string, std::size_t> index;
  for (const Access& a : trace.accesses) {
    auto [it, fresh] = index.emplace(a.phase, out.size());
    if (fresh) out.push_back({a.phase, 0, 0});
    const int w = wavefronts(a.addresses, config);
    out[it->second].wavefronts += w;
    if (w > 1) out[it->second].excess += w - 1;
  }
  return out;
}

namespace {

void check_degree(int degree) {
  if (degree < 1 || degree > 7)
    throw std::invalid_argument("bank model supports degrees 1..7, got " +
                                std::to_string(degree));
}

// Lane ranges [begin, end) of thread indices forming one access.
std::vector<std::pair<int, int>> access_windows(int n, const BankConfig& config) {
  const int threads = n * n;
  const int lanes = config.lanes_per_access();
  std::vector<std::pair<int, int>> w;
  for (int warp = 0; warp * 32 < threads; ++warp)
    for (int a = warp * 32; a < std::min((warp + 1) * 32, threads); a += lanes)
      w.emplace_back(a, std::min({a + lanes, (warp + 1) * 32, threads}));
  return w;
}

bool x_phase_ok(const std::vector<int>& sigma, int assigned, int n,
                const std::vector<std::vector<int>>& column_sets,
                const BankConfig& config) {
  for (const auto& cols : column_sets)
    for (int j = 0; j < n; ++j) {
      std::set<int> banks;
      for (int c : cols) {
        if (c >= assigned) continue;
        const int addr = c * n + (j + sigma[c]) % n;
        if (!banks.insert(addr % config.num_banks).second) return false;
      }
    }
  return true;
}

bool search(std::vector<int>& sigma, int c, int n,
            const std::vector<std::vector<int>>& column_sets, const BankConfig& config) {
  if (c == n) return true;
  for (int t = 0; t < n; ++t) {
    sigma[c] = (c + t) % n;
    if (x_phase_ok(sigma, c + 1, n, column_sets, config) &&
        search(sigma, c + 1, n, column_sets, config))
      return true;
  }
  return false;
}

}  // namespace

std::vector<int> row_offsets(int degree, const BankConfig& config) {
  check_degree(degree);
  const int n = 2 * (degree + 1);
  std::vector<std::vector<int>> column_sets;
  for (auto [b, e] : access_windows(n, config)) {
    std::set<int> cols;
    for (int t = b; t < e; ++t) cols.insert(t % n);
    column_sets.emplace_back(cols.begin(), cols.end());
  }
  std::vector<int> sigma(n);
  for (int c = 0; c < n; ++c) sigma[c] = c;
  if (x_phase_ok(sigma, n, n, column_sets, config)) return sigma;
  if (!search(sigma, 0, n, column_sets, config))
    throw std::runtime_error("no conflict-free row offsets exist for this configuration");
  return sigma;
}

AccessTrace contraction_trace(int degree, int dim, LayoutKind layout,
                              const BankConfig& config) {
  check_degree(degree);
  if (dim != 2 && dim != 3) throw std::invalid_argument("dim must be 2 or 3");
  const int n = 2 * (degree + 1);
  const int slices = dim == 3 ? n : 1;
  std::vector<int> sigma(n, 0);
  if (layout == LayoutKind::ConflictFree) sigma = row_offsets(degree, config);
  const bool shift = layout == LayoutKind::ConflictFree;

  auto address = [&](int s, int row, int col) {
    const int stored = shift ? (col + sigma[row] + s) % n : col;
    return static_cast<std::uint64_t>(s) * n * n + std::uint64_t(row) * n + stored;
  };

  AccessTrace trace;
  const auto windows = access_windows(n, config);
  for (int dir = 0; dir < 2; ++dir)
    for (int s = 0; s < slices; ++s)
      for (auto [b, e] : windows)
        for (int j = 0; j < n; ++j) {
          Access a;
          a.phase = std::string(dir == 0 ? "x" : "y") + "/j" + std::to_string(j);
          for (int t = b; t < e; ++t) {
            const int c = t % n;
            a.addresses.push_back(dir == 0 ? address(s, c, j) : address(s, j, c));
          }
          trace.accesses.push_back(std::move(a));
        }
  return trace;
}

}  // namespace vpmg
