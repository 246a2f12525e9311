#pragma once

/// \file experiment.hpp
/// Experiment drivers behind the command-line harness and the Python module.

#include "vpmg/bank_model.hpp"
#include "vpmg/krylov.hpp"
#include "vpmg/partition.hpp"
#include "vpmg/smoother.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace vpmg {

std::string to_string(PrecisionMode mode);
PrecisionMode precision_from_string(const std::string& name);

struct ExperimentSpec {
  int dim = 3;
  int degree = 3;
  int levels = 2;  // finest level L
  KernelKind kernel = KernelKind::Full;
  PrecisionMode precision = PrecisionMode::Double;
  int ranks = 1;
  double rtol = 1e-8;
  int max_iterations = 100;
  double memory_cap_bytes = 8.0 * 1024 * 1024 * 1024;
  OwnershipPolicy policy = OwnershipPolicy::FewestGhosts;

  /// Throws std::invalid_argument naming the first violated precondition.
  void validate() const;
  /// Rough peak memory of a solve in bytes.
  double estimated_bytes() const;
  std::size_t n_dofs() const;
};

struct SolveResult {
  ExperimentSpec spec;
  ConvergenceHistory history;
  double nu = 0.0;
  double final_relres = 0.0;
  std::string status;  // "ok", "not_converged" or "error: ..."
  std::vector<double> solution;
};

/// f == 1, x0 = 0, GMRES preconditioned by one V-cycle.
SolveResult run_solve(const ExperimentSpec& spec, bool keep_solution = false);

/// One row per (L, k, ranks), L slowest; failures become rows with an
/// error status.
std::vector<SolveResult> run_table(const ExperimentSpec& base, const std::vector<int>& levels,
                                   const std::vector<int>& degrees,
                                   const std::vector<int>& ranks = {});

struct BankRow {
  int degree = 0;
  LayoutKind layout = LayoutKind::Basic;
  std::uint64_t excess = 0;
};

std::vector<BankRow> run_bank_analysis(const std::vector<int>& degrees,
                                       const std::vector<LayoutKind>& layouts, int dim,
                                       const BankConfig& config);

struct PartitionRow {
  int rank = 0;
  std::size_t owned_cells = 0;
  std::size_t ghost_cells = 0;
  std::size_t owned_patches = 0;
  std::size_t ghost_patches = 0;
  std::size_t stored_indices = 0;
};

std::vector<PartitionRow> run_partition_summary(const ExperimentSpec& spec);

std::string solve_csv_header();
std::string to_csv(const SolveResult& r);
std::string bank_csv_header();
std::string to_csv(const BankRow& r);
std::string phase_csv_header();
std::string partition_csv_header();
std::string to_csv(const PartitionRow& r);

/// Renders CSV text (header plus rows) as a markdown table.
std::string csv_to_markdown(const std::string& csv);

/// Inclusive ranges and lists: "3", "2,3", "3-5", "1,3-4".
std::vector<int> parse_int_list(const std::string& text);

}  // namespace vpmg
