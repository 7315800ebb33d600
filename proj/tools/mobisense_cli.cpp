#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mobisense/errors.hpp"
#include "mobisense/experiments.hpp"
#include "mobisense/format.hpp"
#include "mobisense/oracle.hpp"
#include "mobisense/pde_core.hpp"

namespace {

using namespace mobisense;

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kInfeasible = 3;
constexpr int kVerifyFailed = 4;

int cmd_sweep(const std::string& config_file, std::optional<std::uint64_t> seed,
              std::optional<std::string> out_dir, int workers) {
  ExperimentConfig config = load_config(config_file);
  if (seed) config.master_seed = *seed;
  if (out_dir) config.output_path = *out_dir;

  const SweepResult result = run_sweep(config, workers);
  write_sweep_outputs(config.output_path, config, result);

  write_sweep_csv(std::cout, result);
  std::cout << "slope " << format_double(result.slope) << "  intercept "
            << format_double(result.intercept) << '\n';
  std::cout << "wrote " << (std::filesystem::path(config.output_path) / "sweep.csv").string()
            << " and summary.json\n";
  return kOk;
}

int cmd_verify(const std::string& suite, int trials) {
  bool ok = true;
  auto run = [&](const std::string& title, const std::vector<CheckResult>& rows) {
    print_report(std::cout, title, rows);
    std::cout << '\n';
    for (const auto& r : rows) ok = ok && r.passed;
  };
  if (suite == "ode" || suite == "all") run("ode: closed form vs RK4", verify_ode());
  if (suite == "appendix-a" || suite == "all") {
    run("appendix-a: bandlimit preservation", verify_bandlimit());
  }
  if (suite == "appendix-b" || suite == "all") {
    ScalingSuiteOptions options;
    options.trials = trials;
    options.fuzz_paths = trials;
    options.wald_draws = trials;
    run("appendix-b: grid deviation scaling and sample count", verify_scaling(options));
  }
  std::cout << (ok ? "all checks passed" : "verification FAILED") << '\n';
  return ok ? kOk : kVerifyFailed;
}

int cmd_stability(const std::string& pde_file, int band) {
  std::ifstream in(pde_file);
  if (!in) throw ConfigInvalid("cannot open PDE file " + pde_file);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigInvalid(std::string("PDE file is not valid JSON: ") + e.what());
  }
  PdeSpec pde = [&] {
    try {
      return parse_pde(doc);
    } catch (const UnknownScenario& e) {
      throw ConfigInvalid(e.what());
    } catch (const DegenerateOrder& e) {
      throw ConfigInvalid(e.what());
    }
  }();
  const auto report = check_stability(pde, band);
  std::cout << std::setw(4) << "k" << "  " << std::setw(24) << "max Re r(k)"
            << "  status\n";
  for (const auto& [k, worst] : report.worst_real_part) {
    std::cout << std::setw(4) << k << "  " << std::setw(24) << format_double(worst + 0.0)
              << "  " << (worst > kStabilityTolerance ? "growing" : "ok") << '\n';
  }
  std::cout << (report.feasible ? "feasible" : "infeasible") << '\n';
  return report.feasible ? kOk : kInfeasible;
}

int cmd_scenarios() {
  static const char* kNames[] = {"set1", "set2", "diffusion"};
  for (int index = 1; index <= 3; ++index) {
    const auto [pde, field] = catalog_scenario(index);
    std::cout << index << "  field=" << kNames[index - 1] << "  band=" << field.band()
              << "  p=[";
    const auto p = pde.p();
    for (std::size_t i = 0; i < p.size(); ++i) {
      std::cout << (i ? ", " : "") << format_double(p[i]);
    }
    std::cout << "]  q=[";
    const auto q = pde.q();
    for (std::size_t i = 0; i < q.size(); ++i) {
      std::cout << (i ? ", " : "") << format_double(q[i]);
    }
    std::cout << "]\n";
    const auto a0 = coefficients_at(field, 0.0);
    std::cout << "   a_k(0), k=0..3:";
    for (int k = 0; k <= field.band(); ++k) {
      const Complex c = a0[k + field.band()];
      std::ostringstream cell;
      cell << std::setprecision(6) << c.real() << (c.imag() < 0 ? "-" : "+") << "j"
           << std::abs(c.imag());
      std::cout << "  " << cell.str();
    }
    std::cout << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Field reconstruction from a mobile sensor with unknown sample locations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mobisense::kVersion));

  auto* sweep = app.add_subcommand("sweep", "Density sweep with Monte Carlo trials");
  std::string config_file;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  int workers = 1;
  sweep->add_option("--config", config_file, "JSON experiment config")->required();
  sweep->add_option("--seed", seed, "Override master_seed");
  sweep->add_option("--out", out_dir, "Output directory (overrides output_path)");
  sweep->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify", "Run oracle verification suites");
  std::string suite = "all";
  int trials = 10000;
  verify->add_option("--suite", suite, "Suite to run")
      ->check(CLI::IsMember({"ode", "appendix-a", "appendix-b", "all"}));
  verify->add_option("--trials", trials, "Monte Carlo draws for appendix-b")
      ->check(CLI::Range(100, 100000000));

  auto* stability = app.add_subcommand("stability", "Check a PDE for growing modes");
  std::string pde_file;
  int band = 0;
  stability->add_option("--pde", pde_file, "JSON file with p and q coefficients")
      ->required();
  stability->add_option("--band", band, "Band limit b")->required()->check(
      CLI::NonNegativeNumber);

  app.add_subcommand("scenarios", "List the catalog scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*sweep) return cmd_sweep(config_file, seed, out_dir, workers);
    if (*verify) return cmd_verify(suite, trials);
    if (*stability) return cmd_stability(pde_file, band);
    return cmd_scenarios();
  } catch (const mobisense::InfeasiblePde& e) {
    std::cerr << "infeasible PDE: " << e.what() << '\n';
    return kInfeasible;
  } catch (const mobisense::ConfigInvalid& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const mobisense::UnknownScenario& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const mobisense::DegenerateOrder& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
