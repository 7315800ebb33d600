#include <sstream>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mobisense/errors.hpp"
#include "mobisense/experiments.hpp"
#include "mobisense/oracle.hpp"
#include "mobisense/pde_core.hpp"

namespace py = pybind11;
using namespace mobisense;

namespace {

// Configs and records cross the boundary as JSON text; the Python side wraps
// them with json.loads / json.dumps.
py::dict sweep_json(const std::string& config_text, int workers) {
  std::string csv_text;
  std::string summary_text;
  {
    py::gil_scoped_release release;
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(config_text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigInvalid(std::string("config is not valid JSON: ") + e.what());
    }
    const ExperimentConfig config = parse_config(doc);
    const SweepResult result = run_sweep(config, workers);
    std::ostringstream csv;
    write_sweep_csv(csv, result);
    csv_text = csv.str();
    summary_text = sweep_summary(config, result).dump();
  }
  py::dict out;
  out["csv"] = csv_text;
  out["summary"] = summary_text;
  return out;
}

py::list report(const std::vector<CheckResult>& rows) {
  py::list out;
  for (const auto& r : rows) {
    py::dict d;
    d["name"] = r.name;
    d["value"] = r.value;
    d["bound"] = r.bound;
    d["passed"] = r.passed;
    out.append(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_mobisense, m) {
  m.doc() = "Native core of mobisense";
  m.attr("__version__") = kVersion;

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigInvalid>(m, "ConfigInvalid", base.ptr());
  py::register_exception<InfeasiblePde>(m, "InfeasiblePde", base.ptr());
  py::register_exception<UnknownScenario>(m, "UnknownScenario", base.ptr());
  py::register_exception<DegenerateOrder>(m, "DegenerateOrder", base.ptr());
  py::register_exception<DegenerateRoots>(m, "DegenerateRoots", base.ptr());
  py::register_exception<DegenerateFit>(m, "DegenerateFit", base.ptr());
  py::register_exception<RankDeficient>(m, "RankDeficient", base.ptr());
  py::register_exception<InsufficientSamples>(m, "InsufficientSamples", base.ptr());

  m.def(
      "catalog_pde",
      [](int index) {
        const PdeSpec pde = catalog_pde(index);
        return py::make_tuple(std::vector<double>(pde.p().begin(), pde.p().end()),
                              std::vector<double>(pde.q().begin(), pde.q().end()));
      },
      py::arg("index"), "(p, q) coefficient lists of catalog PDE 1..3");

  m.def(
      "characteristic_roots",
      [](std::vector<double> p, std::vector<double> q, int k) {
        return characteristic_roots(PdeSpec(std::move(p), std::move(q)), k).roots;
      },
      py::arg("p"), py::arg("q"), py::arg("k"));

  m.def(
      "check_stability",
      [](std::vector<double> p, std::vector<double> q, int band) {
        const auto r = check_stability(PdeSpec(std::move(p), std::move(q)), band);
        return py::make_tuple(r.feasible, r.worst_real_part);
      },
      py::arg("p"), py::arg("q"), py::arg("band"),
      "(feasible, {k: max real part})");

  m.def(
      "scenario_coefficients",
      [](int index, double t) { return coefficients_at(catalog_scenario(index).second, t); },
      py::arg("index"), py::arg("t") = 0.0, "a_k(t) for k = -3..3");

  m.def(
      "evaluate_scenario",
      [](int index, double x, double t) {
        return evaluate(catalog_scenario(index).second, x, t);
      },
      py::arg("index"), py::arg("x"), py::arg("t"));

  m.def(
      "fit_loglog_slope",
      [](const std::vector<std::pair<double, double>>& points) {
        const auto fit = fit_loglog_slope(points);
        return py::make_tuple(fit.slope, fit.intercept);
      },
      py::arg("points"));

  m.def("_run_sweep", &sweep_json, py::arg("config_json"), py::arg("workers") = 1);

  m.def("verify_ode", [] { return report(verify_ode()); });
  m.def("verify_bandlimit", [](std::uint64_t seed) { return report(verify_bandlimit(seed)); },
        py::arg("seed") = 1);
  m.def(
      "verify_scaling",
      [](int trials, std::uint64_t seed) {
        ScalingSuiteOptions options;
        options.trials = trials;
        options.fuzz_paths = trials;
        options.wald_draws = trials;
        options.seed = seed;
        return report(verify_scaling(options));
      },
      py::arg("trials") = 10000, py::arg("seed") = 1);
}
