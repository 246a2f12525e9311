// Command-line harness: solve, table, bank, partition.

#include "vpmg/experiment.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

struct Options {
  int dim = 3;
  std::string degree = "3";
  std::string levels = "2";
  std::string kernel = "full";
  std::string precision = "double";
  std::string ranks = "1";
  std::string policy = "fewest_ghosts";
  double rtol = 1e-8;
  int max_iterations = 100;
  double memory_cap_gib = 8.0;
  std::string output;
  std::string format = "csv";
  bool serial = false;
  // bank
  std::string layouts = "basic,conflict_free";
  std::string words = "double";
  bool phases = false;
};

void add_problem_options(CLI::App* app, Options& o, bool lists) {
  app->add_option("--dim", o.dim, "Space dimension")->check(CLI::IsMember({2, 3}));
  app->add_option("--degree", o.degree, lists ? "Degrees, e.g. 3-5 or 3,4" : "Degree k");
  app->add_option("--levels", o.levels, lists ? "Finest levels, e.g. 2,3" : "Finest level L");
  app->add_option("--kernel", o.kernel, "Local solver")
      ->check(CLI::IsMember({"full", "dirichlet", "clamped"}));
  app->add_option("--precision", o.precision, "V-cycle precision")
      ->check(CLI::IsMember({"double", "mixed"}));
  app->add_option("--ranks", o.ranks, lists ? "Simulated rank counts" : "Simulated ranks");
  app->add_option("--policy", o.policy, "Ghost patch ownership")
      ->check(CLI::IsMember({"fewest_ghosts", "smallest_cell_index"}));
  app->add_option("--rtol", o.rtol, "Relative residual target");
  app->add_option("--max-iterations", o.max_iterations, "GMRES iteration limit");
  app->add_option("--memory-cap-gib", o.memory_cap_gib, "Refuse larger problems");
}

int single(const std::string& text, const char* what) {
  const auto v = vpmg::parse_int_list(text);
  if (v.size() != 1) throw std::invalid_argument(std::string(what) + " takes one value");
  return v.front();
}

vpmg::ExperimentSpec make_spec(const Options& o) {
  vpmg::ExperimentSpec s;
  s.dim = o.dim;
  s.degree = single(o.degree, "--degree");
  s.levels = single(o.levels, "--levels");
  s.kernel = vpmg::kernel_from_string(o.kernel);
  s.precision = vpmg::precision_from_string(o.precision);
  s.ranks = single(o.ranks, "--ranks");
  s.rtol = o.rtol;
  s.max_iterations = o.max_iterations;
  s.memory_cap_bytes = o.memory_cap_gib * 1024.0 * 1024.0 * 1024.0;
  s.policy = o.policy == "fewest_ghosts" ? vpmg::OwnershipPolicy::FewestGhosts
                                         : vpmg::OwnershipPolicy::SmallestCellIndex;
  return s;
}

void emit(const Options& o, const std::string& csv) {
  const std::string text = o.format == "markdown" ? vpmg::csv_to_markdown(csv) : csv;
  if (o.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.output);
  if (!f) throw std::runtime_error("cannot open " + o.output);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vertex-patch multigrid for interior penalty DG"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value file mirroring the flags");
  Options o;
  app.add_option("--output", o.output, "Write results to PATH instead of stdout");
  app.add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "markdown"}));
  app.add_flag("--serial", o.serial, "Sequential execution (the default on this build)");

  auto* solve = app.add_subcommand("solve", "Solve with f = 1 and report nu");
  add_problem_options(solve, o, false);
  auto* table = app.add_subcommand("table", "Iteration counts over levels and degrees");
  add_problem_options(table, o, true);
  auto* bank = app.add_subcommand("bank", "Bank conflict model");
  bank->add_option("--dim", o.dim, "Space dimension")->check(CLI::IsMember({2, 3}));
  bank->add_option("--degree", o.degree, "Degrees")->default_str("3-7");
  bank->add_option("--layouts", o.layouts, "basic,conflict_free");
  bank->add_option("--words", o.words, "double (16 banks) or single (32 banks)")
      ->check(CLI::IsMember({"double", "single"}));
  bank->add_flag("--phases", o.phases, "Per-phase table for one degree and layout");
  auto* part = app.add_subcommand("partition", "Per-rank ownership summary");
  add_problem_options(part, o, false);

  CLI11_PARSE(app, argc, argv);

  try {
    std::ostringstream csv;
    if (*solve) {
      const auto r = vpmg::run_solve(make_spec(o));
      csv << vpmg::solve_csv_header() << '\n' << vpmg::to_csv(r) << '\n';
    } else if (*table) {
      Options first = o;
      first.degree = first.levels = first.ranks = "1";
      vpmg::ExperimentSpec base = make_spec(first);
      const auto rows =
          vpmg::run_table(base, vpmg::parse_int_list(o.levels), vpmg::parse_int_list(o.degree),
                          vpmg::parse_int_list(o.ranks));
      csv << vpmg::solve_csv_header() << '\n';
      for (const auto& r : rows) csv << vpmg::to_csv(r) << '\n';
    } else if (*bank) {
      if (bank->count("--degree") == 0) o.degree = "3-7";
      const vpmg::BankConfig config = o.words == "double"
                                          ? vpmg::BankConfig::double_precision()
                                          : vpmg::BankConfig::single_precision();
      std::vector<vpmg::LayoutKind> layouts;
      std::istringstream is(o.layouts);
      for (std::string name; std::getline(is, name, ',');)
        layouts.push_back(vpmg::layout_from_string(name));
      const auto degrees = vpmg::parse_int_list(o.degree);
      if (o.phases) {
        if (degrees.size() != 1 || layouts.size() != 1)
          throw std::invalid_argument("--phases needs one degree and one layout");
        const auto trace = vpmg::contraction_trace(degrees[0], o.dim, layouts[0], config);
        csv << vpmg::phase_csv_header() << '\n';
        for (const auto& p : vpmg::count_by_phase(trace, config))
          csv << p.phase << ',' << p.wavefronts << ',' << p.excess << '\n';
      } else {
        csv << vpmg::bank_csv_header() << '\n';
        for (const auto& r : vpmg::run_bank_analysis(degrees, layouts, o.dim, config))
          csv << vpmg::to_csv(r) << '\n';
      }
    } else if (*part) {
      csv << vpmg::partition_csv_header() << '\n';
      for (const auto& r : vpmg::run_partition_summary(make_spec(o)))
        csv << vpmg::to_csv(r) << '\n';
    }
    emit(o, csv.str());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
