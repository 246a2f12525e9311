#include "vpmg/experiment.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace vpmg {

std::string to_string(PrecisionMode mode) {
  return mode == PrecisionMode::Double ? "double" : "mixed";
}

PrecisionMode precision_from_string(const std::string& name) {
  if (name == "double") return PrecisionMode::Double;
  if (name == "mixed") return PrecisionMode::Mixed;
  throw std::invalid_argument("unknown precision '" + name + "'");
}

std::size_t ExperimentSpec::n_dofs() const {
  std::size_t cells_1d = std::size_t{1} << (levels + 1);
  std::size_t n = 1;
  for (int d = 0; d < dim; ++d) n *= cells_1d * static_cast<std::size_t>(degree + 1);
  return n;
}

double ExperimentSpec::estimated_bytes() const {
  // Krylov basis plus about a dozen level vectors, in double precision
  const double n = static_cast<double>(n_dofs());
  return n * 8.0 * (max_iterations + 16);
}

void ExperimentSpec::validate() const {
  if (dim != 2 && dim != 3) throw std::invalid_argument("dim must be 2 or 3");
  if (levels < 0 || levels > 12) throw std::invalid_argument("levels must lie in [0, 12]");
  if (degree < 1 || degree > 15) throw std::invalid_argument("degree must lie in [1, 15]");
  if (kernel == KernelKind::Clamped && degree < 3)
    throw std::invalid_argument("clamped kernel requires degree >= 3");
  const int cells = 1 << (levels + 1);
  if (ranks < 1 || ranks > cells)
    throw std::invalid_argument("ranks must lie in [1, " + std::to_string(cells) + "]");
  if (!(rtol > 0.0 && rtol < 1.0)) throw std::invalid_argument("rtol must lie in (0,1)");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be positive");
  if (estimated_bytes() > memory_cap_bytes) {
    std::ostringstream os;
    os << "estimated memory " << estimated_bytes() / (1024.0 * 1024 * 1024)
       << " GiB exceeds the cap of " << memory_cap_bytes / (1024.0 * 1024 * 1024) << " GiB";
    throw std::invalid_argument(os.str());
  }
}

SolveResult run_solve(const ExperimentSpec& spec, bool keep_solution) {
  spec.validate();
  SolveResult res;
  res.spec = spec;
  const MeshHierarchy mesh(spec.dim, spec.levels);
  const Basis1D basis = make_basis(basis_for(spec.kernel), spec.degree);
  const GlobalOperator<double> op(mesh, basis);
  const std::vector<double> b = assemble_rhs_constant(mesh, spec.levels, basis);
  std::vector<double> x(b.size());

  SolverConfig config;
  config.rtol = spec.rtol;
  config.max_iterations = spec.max_iterations;
  config.precision = spec.precision;

  if (spec.ranks > 1) {
    res.history = distributed_solve(op, spec.kernel, spec.ranks, b, x, config, spec.policy);
  } else {
    LinearMap a = [&](std::span<const double> in, std::span<double> out) {
      op.vmult(spec.levels, out, in);
    };
    if (spec.precision == PrecisionMode::Double) {
      const VCycle<double> mg(op, spec.kernel);
      LinearMap p = [&](std::span<const double> in, std::span<double> out) {
        mg.apply(in, out);
      };
      res.history = gmres(a, b, x, p, config);
    } else {
      const MixedPrecisionVCycle mg(mesh, basis, spec.kernel);
      LinearMap p = [&](std::span<const double> in, std::span<double> out) {
        mg.apply(in, out);
      };
      res.history = gmres(a, b, x, p, config);
    }
  }
  res.nu = res.history.nu;
  res.final_relres = res.history.relative_residual();
  res.status = res.history.converged ? "ok" : "not_converged";
  if (keep_solution) res.solution = std::move(x);
  return res;
}

std::vector<SolveResult> run_table(const ExperimentSpec& base, const std::vector<int>& levels,
                                   const std::vector<int>& degrees,
                                   const std::vector<int>& ranks) {
  const std::vector<int> rank_list = ranks.empty() ? std::vector<int>{base.ranks} : ranks;
  std::vector<SolveResult> rows;
  for (int L : levels)
    for (int k : degrees)
      for (int r : rank_list) {
        ExperimentSpec s = base;
        s.levels = L;
        s.degree = k;
        s.ranks = r;
        try {
          rows.push_back(run_solve(s));
        } catch (const std::exception& e) {
          SolveResult failed;
          failed.spec = s;
          failed.nu = std::nan("");
          failed.final_relres = std::nan("");
          failed.status = std::string("error: ") + e.what();
          rows.push_back(std::move(failed));
        }
      }
  return rows;
}

std::vector<BankRow> run_bank_analysis(const std::vector<int>& degrees,
                                       const std::vector<LayoutKind>& layouts, int dim,
                                       const BankConfig& config) {
  std::vector<BankRow> rows;
  for (int k : degrees)
    for (LayoutKind layout : layouts)
      rows.push_back(
          {k, layout, count_excess_wavefronts(contraction_trace(k, dim, layout, config), config)});
  return rows;
}

std::vector<PartitionRow> run_partition_summary(const ExperimentSpec& spec) {
  spec.validate();
  const MeshHierarchy mesh(spec.dim, spec.levels);
  const int n1 = spec.degree + 1;
  std::size_t dpc = 1;
  for (int d = 0; d < spec.dim; ++d) dpc *= n1;
  const DistributedLevel dist(mesh, spec.levels, spec.ranks, dpc, n1, spec.policy);
  std::vector<PartitionRow> rows;
  for (int r = 0; r < dist.nranks(); ++r) {
    PartitionRow row;
    row.rank = r;
    row.owned_cells = dist.n_owned_cells(r);
    row.ghost_cells = dist.local_cells(r).size() - row.owned_cells;
    for (std::size_t c = 0; c < dist.colors().size(); ++c) {
      const GhostPatchStorage& s = dist.storage(r, static_cast<int>(c));
      row.owned_patches += s.size();
      for (std::size_t i = 0; i < s.size(); ++i) row.ghost_patches += s.is_ghost_patch(i);
      row.stored_indices += s.stored_indices();
    }
    rows.push_back(row);
  }
  return rows;
}

namespace {

std::string number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

}  // namespace

std::string solve_csv_header() {
  return "dim,k,L,kernel,precision,ranks,n,nu,final_relres,status";
}

std::string to_csv(const SolveResult& r) {
  std::ostringstream os;
  os << r.spec.dim << ',' << r.spec.degree << ',' << r.spec.levels << ','
     << to_string(r.spec.kernel) << ',' << to_string(r.spec.precision) << ',' << r.spec.ranks
     << ',' << r.history.iterations << ',' << number(r.nu) << ',' << number(r.final_relres)
     << ',';
  std::string status = r.status;
  for (char& c : status)
    if (c == ',' || c == '\n') c = ';';
  os << status;
  return os.str();
}

std::string bank_csv_header() { return "k,layout,excess"; }

std::string to_csv(const BankRow& r) {
  return std::to_string(r.degree) + "," + to_string(r.layout) + "," + std::to_string(r.excess);
}

std::string phase_csv_header() { return "phase,wavefronts,excess"; }

std::string partition_csv_header() {
  return "rank,owned_cells,ghost_cells,owned_patches,ghost_patches,stored_indices";
}

std::string to_csv(const PartitionRow& r) {
  std::ostringstream os;
  os << r.rank << ',' << r.owned_cells << ',' << r.ghost_cells << ',' << r.owned_patches
     << ',' << r.ghost_patches << ',' << r.stored_indices;
  return os.str();
}

std::string csv_to_markdown(const std::string& csv) {
  std::istringstream is(csv);
  std::string line;
  std::ostringstream os;
  bool header = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    os << '|';
    for (const auto& c : cells) os << ' ' << c << " |";
    os << '\n';
    if (header) {
      os << '|';
      for (std::size_t i = 0; i < cells.size(); ++i) os << "---|";
      os << '\n';
      header = false;
    }
  }
  return os.str();
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const std::string& part : split(text, ',')) {
    if (part.empty()) throw std::invalid_argument("empty entry in list '" + text + "'");
    const auto dash = part.find('-', 1);
    auto to_int = [&](const std::string& s) {
      int v = 0;
      const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::invalid_argument("not an integer: '" + s + "'");
      return v;
    };
    if (dash == std::string::npos) {
      out.push_back(to_int(part));
    } else {
      const int lo = to_int(part.substr(0, dash)), hi = to_int(part.substr(dash + 1));
      if (hi < lo) throw std::invalid_argument("empty range '" + part + "'");
      for (int v = lo; v <= hi; ++v) out.push_back(v);
    }
  }
  return out;
}

}  // namespace vpmg
