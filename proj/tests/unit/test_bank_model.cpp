#include "doctest.h"

#include "vpmg/bank_model.hpp"

#include <numeric>
#include <set>
#include <stdexcept>

using namespace vpmg;

TEST_CASE("wavefronts of single accesses") {
  const BankConfig c = BankConfig::double_precision();
  std::vector<std::uint64_t> a(16);
  std::iota(a.begin(), a.end(), 0);
  CHECK(wavefronts(a, c) == 1);  // one word per bank
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = 16 * i;
  CHECK(wavefronts(a, c) == 16);  // all in bank 0
  std::fill(a.begin(), a.end(), 7);
  CHECK(wavefronts(a, c) == 1);  // broadcast
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = 2 * i;
  CHECK(wavefronts(a, c) == 2);
  CHECK(wavefronts({}, c) == 0);
}

TEST_CASE("excess counts sum over accesses") {
  const BankConfig c{4, 8};
  AccessTrace t;
  t.accesses.push_back({"x", {0, 4, 8}});  // 3 in bank 0
  t.accesses.push_back({"y", {0, 1, 2}});
  t.accesses.push_back({"x", {1, 5}});
  CHECK(count_excess_wavefronts(t, c) == 3);
  const auto phases = count_by_phase(t, c);
  REQUIRE(phases.size() == 2);
  CHECK(phases[0].phase == "x");
  CHECK(phases[0].wavefronts == 5);
  CHECK(phases[0].excess == 3);
  CHECK(phases[1].excess == 0);
}

TEST_CASE("lanes per access") {
  CHECK(BankConfig::double_precision().lanes_per_access() == 16);
  CHECK(BankConfig::single_precision().lanes_per_access() == 32);
}

TEST_CASE("conflict-free layout has no excess wavefronts") {
  for (int dim : {2, 3})
    for (int k = 3; k <= 7; ++k)
      for (const BankConfig& c : {BankConfig::double_precision(), BankConfig::single_precision()})
        CHECK(count_excess_wavefronts(contraction_trace(k, dim, LayoutKind::ConflictFree, c), c) ==
              0);
}

TEST_CASE("basic layout conflicts with eight byte words") {
  const BankConfig c = BankConfig::double_precision();
  for (int k = 3; k <= 7; ++k)
    CHECK(count_excess_wavefronts(contraction_trace(k, 3, LayoutKind::Basic, c), c) > 0);
}

TEST_CASE("both layouts issue the same accesses") {
  const BankConfig c = BankConfig::double_precision();
  const auto a = contraction_trace(4, 3, LayoutKind::Basic, c);
  const auto b = contraction_trace(4, 3, LayoutKind::ConflictFree, c);
  REQUIRE(a.accesses.size() == b.accesses.size());
  for (std::size_t i = 0; i < a.accesses.size(); ++i) {
    CHECK(a.accesses[i].phase == b.accesses[i].phase);
    CHECK(a.accesses[i].addresses.size() == b.accesses[i].addresses.size());
  }
}

TEST_CASE("row offsets") {
  for (int k = 1; k <= 7; ++k) {
    const auto s = row_offsets(k, BankConfig::double_precision());
    CHECK(s.size() == std::size_t(2 * (k + 1)));
  }
}

TEST_CASE("trace preconditions") {
  const BankConfig c = BankConfig::double_precision();
  CHECK_THROWS_AS(contraction_trace(8, 3, LayoutKind::Basic, c), std::invalid_argument);
  CHECK_THROWS_AS(contraction_trace(3, 1, LayoutKind::Basic, c), std::invalid_argument);
  CHECK(layout_from_string("conflict_free") == LayoutKind::ConflictFree);
  CHECK(to_string(LayoutKind::Basic) == "basic");
  CHECK_THROWS_AS(layout_from_string("padded"), std::invalid_argument);
}
