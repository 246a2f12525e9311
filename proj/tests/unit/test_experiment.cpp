#include "doctest.h"

#include "vpmg/experiment.hpp"

using namespace vpmg;

TEST_CASE("integer lists") {
  CHECK(parse_int_list("3") == std::vector<int>{3});
  CHECK(parse_int_list("3-5") == std::vector<int>{3, 4, 5});
  CHECK(parse_int_list("1,3-4") == std::vector<int>{1, 3, 4});
  CHECK_THROWS_AS(parse_int_list("a"), std::invalid_argument);
  CHECK_THROWS_AS(parse_int_list("5-3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_int_list("1,,2"), std::invalid_argument);
}

TEST_CASE("spec validation") {
  ExperimentSpec s;
  CHECK_NOTHROW(s.validate());
  s.kernel = KernelKind::Clamped;
  s.degree = 2;
  CHECK_THROWS_WITH_AS(s.validate(), "clamped kernel requires degree >= 3", std::invalid_argument);
  s = ExperimentSpec{};
  s.ranks = 9;  // eight slabs on level 2
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = ExperimentSpec{};
  s.degree = 7;
  s.levels = 6;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.memory_cap_bytes = 1e15;
  CHECK_NOTHROW(s.validate());
  CHECK(ExperimentSpec{}.n_dofs() == 512 * 64);
}

TEST_CASE("small solve and its csv row") {
  ExperimentSpec s;
  s.dim = 2;
  s.degree = 2;
  s.levels = 1;
  const auto r = run_solve(s, true);
  CHECK(r.status == "ok");
  CHECK(r.nu > 0);
  CHECK(r.final_relres <= 1e-8);
  CHECK(r.solution.size() == s.n_dofs());
  const std::string row = to_csv(r);
  CHECK(row.rfind("2,2,1,full,double,1,", 0) == 0);
  CHECK(row.substr(row.size() - 3) == ",ok");
}

TEST_CASE("table rows carry errors instead of aborting") {
  ExperimentSpec s;
  s.dim = 2;
  s.kernel = KernelKind::Clamped;
  const auto rows = run_table(s, {1}, {2, 3});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].status.rfind("error: ", 0) == 0);
  CHECK(rows[1].status == "ok");
  CHECK(to_csv(rows[0]).find("nan,nan") != std::string::npos);
}

TEST_CASE("markdown rendering") {
  const std::string md = csv_to_markdown("a,b\n1,2\n");
  CHECK(md == "| a | b |\n|---|---|\n| 1 | 2 |\n");
}

TEST_CASE("partition summary covers the mesh") {
  ExperimentSpec s;
  s.ranks = 3;
  const auto rows = run_partition_summary(s);
  REQUIRE(rows.size() == 3);
  std::size_t cells = 0, patches = 0;
  for (const auto& r : rows) {
    cells += r.owned_cells;
    patches += r.owned_patches;
  }
  CHECK(cells == 512);
  CHECK(patches == 343);
}

TEST_CASE("bank rows") {
  const auto rows = run_bank_analysis({3, 4}, {LayoutKind::Basic, LayoutKind::ConflictFree}, 3,
                                      BankConfig::double_precision());
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].excess > 0);
  CHECK(rows[1].excess == 0);
  CHECK(to_csv(rows[1]) == "3,conflict_free,0");
}
