#include "vpmg/experiment.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace vpmg;

namespace {

ExperimentSpec make_spec(int dim, int degree, int levels, const std::string& kernel,
                         const std::string& precision, int ranks, double rtol,
                         int max_iterations) {
  ExperimentSpec s;
  s.dim = dim;
  s.degree = degree;
  s.levels = levels;
  s.kernel = kernel_from_string(kernel);
  s.precision = precision_from_string(precision);
  s.ranks = ranks;
  s.rtol = rtol;
  s.max_iterations = max_iterations;
  return s;
}

py::dict as_dict(const SolveResult& r) {
  py::dict d;
  d["dim"] = r.spec.dim;
  d["degree"] = r.spec.degree;
  d["levels"] = r.spec.levels;
  d["kernel"] = to_string(r.spec.kernel);
  d["precision"] = to_string(r.spec.precision);
  d["ranks"] = r.spec.ranks;
  d["n_dofs"] = r.spec.n_dofs();
  d["iterations"] = r.history.iterations;
  d["nu"] = r.nu;
  d["final_relres"] = r.final_relres;
  d["residuals"] = r.history.residuals;
  d["status"] = r.status;
  if (!r.solution.empty()) d["solution"] = r.solution;
  return d;
}

}  // namespace

PYBIND11_MODULE(_vpmg, m) {
  m.def(
      "solve",
      [](int dim, int degree, int levels, const std::string& kernel, const std::string& precision,
         int ranks, double rtol, int max_iterations, bool keep_solution) {
        const auto s = make_spec(dim, degree, levels, kernel, precision, ranks, rtol, max_iterations);
        s.validate();
        SolveResult r;
        {
          py::gil_scoped_release release;
          r = run_solve(s, keep_solution);
        }
        return as_dict(r);
      },
      py::arg("dim") = 3, py::arg("degree") = 3, py::arg("levels") = 2, py::arg("kernel") = "full",
      py::arg("precision") = "double", py::arg("ranks") = 1, py::arg("rtol") = 1e-8,
      py::arg("max_iterations") = 100, py::arg("keep_solution") = false);

  m.def(
      "table",
      [](int dim, const std::vector<int>& levels, const std::vector<int>& degrees,
         const std::string& kernel, const std::string& precision, double rtol) {
        const auto base = make_spec(dim, 3, 2, kernel, precision, 1, rtol, 100);
        std::vector<SolveResult> rows;
        {
          py::gil_scoped_release release;
          rows = run_table(base, levels, degrees);
        }
        py::list out;
        for (const auto& r : rows) out.append(as_dict(r));
        return out;
      },
      py::arg("dim"), py::arg("levels"), py::arg("degrees"), py::arg("kernel") = "full",
      py::arg("precision") = "double", py::arg("rtol") = 1e-8);

  m.def(
      "bank",
      [](const std::vector<int>& degrees, const std::vector<std::string>& layouts, int dim,
         const std::string& words) {
        std::vector<LayoutKind> kinds;
        for (const auto& l : layouts) kinds.push_back(layout_from_string(l));
        if (words != "double" && words != "single")
          throw std::invalid_argument("words must be 'double' or 'single'");
        const BankConfig c =
            words == "double" ? BankConfig::double_precision() : BankConfig::single_precision();
        py::list out;
        for (const auto& r : run_bank_analysis(degrees, kinds, dim, c)) {
          py::dict d;
          d["degree"] = r.degree;
          d["layout"] = to_string(r.layout);
          d["excess"] = r.excess;
          out.append(d);
        }
        return out;
      },
      py::arg("degrees"), py::arg("layouts") = std::vector<std::string>{"basic", "conflict_free"},
      py::arg("dim") = 3, py::arg("words") = "double");

  m.def(
      "partition",
      [](int dim, int degree, int levels, int ranks) {
        const auto s = make_spec(dim, degree, levels, "full", "double", ranks, 1e-8, 100);
        s.validate();
        py::list out;
        for (const auto& r : run_partition_summary(s)) {
          py::dict d;
          d["rank"] = r.rank;
          d["owned_cells"] = r.owned_cells;
          d["ghost_cells"] = r.ghost_cells;
          d["owned_patches"] = r.owned_patches;
          d["ghost_patches"] = r.ghost_patches;
          d["stored_indices"] = r.stored_indices;
          out.append(d);
        }
        return out;
      },
      py::arg("dim") = 3, py::arg("degree") = 3, py::arg("levels") = 2, py::arg("ranks") = 2);

  m.def(
      "fractional_iterations",
      [](const std::vector<double>& residuals, double rtol) {
        ConvergenceHistory h;
        h.residuals = residuals;
        h.iterations = int(residuals.size()) - 1;
        return fractional_iterations(h, rtol);
      },
      py::arg("residuals"), py::arg("rtol") = 1e-8);

  m.def("parse_int_list", &parse_int_list);
  py::register_exception<AlreadyConverged>(m, "AlreadyConverged", PyExc_ValueError);
}
