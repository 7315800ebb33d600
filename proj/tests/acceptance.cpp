// One PASS/FAIL line per acceptance criterion. Exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mobisense/errors.hpp"
#include "mobisense/estimator.hpp"
#include "mobisense/experiments.hpp"
#include "mobisense/oracle.hpp"

using namespace mobisense;

namespace {

constexpr std::uint64_t kMasterSeed = 1;
const std::vector<int> kSweepGrid{128, 256, 512, 1024, 2048, 4096, 8192};
constexpr ScenarioId kFields[] = {ScenarioId::kSet1, ScenarioId::kSet2,
                                  ScenarioId::kDiffusion};

struct Line {
  int id;
  bool passed;
  std::string detail;
};

std::string num(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

ExperimentConfig scenario_config(int index, int trials) {
  ExperimentConfig config;
  config.scenario.catalog = kFields[index - 1];
  config.pde = catalog_pde(index);
  config.n_list = kSweepGrid;
  config.trials = trials;
  config.noise = {NoiseFamily::kGaussian, 1e-4};
  config.master_seed = kMasterSeed;
  return config;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// Random feasible PDE of order 1 or 2 and a random real field over it.
FieldState random_instance(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int band = 1 + static_cast<int>(3 * u(rng));
  PdeSpec pde = u(rng) < 0.5
                    ? PdeSpec({0.0, 0.5 + u(rng)}, {-0.2 * u(rng), 0.0, 0.002 + 0.01 * u(rng)})
                    : PdeSpec({0.0, 1.0 + 3.0 * u(rng), 1.0}, {0.0, 0.0, 0.002 + 0.01 * u(rng)});
  return random_real_field(band, pde, DerivativePolicy::kRestAtZero, rng);
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  std::vector<Line> lines;

  // Criteria 1, 2, 8 (chain part) and 9 share the catalog-scenario sweeps.
  SweepResult sweeps[3];
  for (int index = 1; index <= 3; ++index) {
    sweeps[index - 1] = run_sweep(scenario_config(index, 64));
  }

  {
    bool ok = true;
    std::string detail;
    for (int i = 0; i < 3; ++i) {
      const double s = sweeps[i].slope;
      const bool good = std::isfinite(s) && s >= -1.15 && s <= -0.85;
      ok = ok && good;
      detail += "s" + std::to_string(i + 1) + "=" + num(s) + (good ? "" : "(out)") + " ";
    }
    lines.push_back({1, ok, detail + "band [-1.15, -0.85]"});
  }
  {
    bool ok = true;
    std::string detail;
    for (int i = 0; i < 3; ++i) {
      std::vector<double> scaled;
      int failures = 0;
      for (const auto& row : sweeps[i].rows) {
        scaled.push_back(row.n * row.mean_distortion);
        failures += row.rank_failures;
      }
      const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
      const double ratio = *hi / *lo;
      const bool good = std::isfinite(ratio) && ratio < 5.0;
      ok = ok && good;
      detail += "r" + std::to_string(i + 1) + "=" + num(ratio) + (good ? "" : "(out)");
      if (failures > 0) detail += "[rank failures " + std::to_string(failures) + "]";
      detail += " ";
    }
    lines.push_back({2, ok, detail + "max/min n*d < 5"});
  }

  {
    double worst = 0.0;
    for (int index = 1; index <= 3; ++index) {
      ExperimentConfig config = scenario_config(index, 2);
      config.renewal.family = RenewalFamily::kDeterministic;
      config.noise = {NoiseFamily::kNone, 0.0};
      for (const auto& row : run_sweep(config).rows) {
        worst = std::max(worst, row.rank_failures > 0 ? INFINITY : row.mean_distortion);
      }
    }
    lines.push_back({3, worst < 1e-14, "max mean_distortion=" + num(worst) + " < 1e-14"});
  }

  {
    const auto rows = verify_ode();
    bool ok = true;
    double dev = 0.0;
    double lo = INFINITY;
    double hi = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      ok = ok && rows[i].passed;
      if (i % 2 == 0) {
        dev = std::max(dev, rows[i].value);
      } else {
        lo = std::min(lo, rows[i].value);
        hi = std::max(hi, rows[i].value);
      }
    }
    lines.push_back({4, ok, "max deviation=" + num(dev) + " (< 1e-6), halving ratios in [" +
                                num(lo) + ", " + num(hi) + "] (need [8, 32])"});
  }

  {
    const auto rows = verify_bandlimit(kMasterSeed);
    bool ok = true;
    std::string detail;
    for (const auto& r : rows) {
      ok = ok && r.passed;
      detail += num(r.value) + (r.passed ? "" : "(fail)") + " ";
    }
    lines.push_back({5, ok, "out-of-band, zero-map, control = " + detail});
  }

  // verify_scaling bundles criteria 6 (table + invariants) and 7 (Wald).
  {
    ScalingSuiteOptions options;
    options.seed = kMasterSeed;
    const auto rows = verify_scaling(options);
    bool ok6 = true;
    bool ok7 = true;
    std::string d6;
    std::string d7;
    for (const auto& r : rows) {
      if (r.name.find("E[M]") != std::string::npos) {
        ok7 = ok7 && r.passed;
        d7 += r.name + "=" + num(r.value, 7) + " " + r.bound + "; ";
      } else {
        ok6 = ok6 && r.passed;
        if (r.name.find("max/min") != std::string::npos ||
            r.name.find("violations") != std::string::npos) {
          d6 += r.name + "=" + num(r.value) + "; ";
        }
      }
    }
    lines.push_back({6, ok6, d6});
    lines.push_back({7, ok7, d7});
  }

  {
    int polya = 0;
    int floor = 0;
    int instances = 0;
    int skipped = 0;
    Rng rng(kMasterSeed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    while (instances < 100) {
      const FieldState field = random_instance(rng);
      const int cols = field.modes() * field.order();
      const int rows = cols + 5 + static_cast<int>(500 * u(rng));
      const double horizon = 0.05 + 0.95 * u(rng);
      const auto design = build_design_matrix(field.all_roots(),
                                              uniform_grid(rows, horizon), GridKind::kUniform);
      try {
        const auto diag = condition_diagnostics(design, field.all_roots(), horizon);
        polya += diag.polya_szego_ok;
        floor += diag.trace_lower_ok;
        ++instances;
      } catch (const RankDeficient&) {
        ++skipped;
      }
    }
    int chain = 0;
    for (const auto& sweep : sweeps) {
      for (const auto& row : sweep.rows) chain += row.chain_violations;
    }
    const bool ok = polya == 100 && floor == 100 && chain == 0;
    lines.push_back({8, ok, "polya-szego " + std::to_string(polya) + "/100, trace floor " +
                                std::to_string(floor) + "/100, chain violations " +
                                std::to_string(chain) + " (rank-deficient draws skipped: " +
                                std::to_string(skipped) + ")"});
  }

  {
    const auto& rows = sweeps[2].rows;
    double lo = INFINITY;
    double hi = 0.0;
    std::string detail;
    for (const auto& row : rows) {
      lo = std::min(lo, row.mean_kappa);
      hi = std::max(hi, row.mean_kappa);
      detail += std::to_string(row.n) + ":" + num(row.mean_kappa) + " ";
    }
    lines.push_back({9, hi / lo < 10.0, "diffusion mean_kappa " + detail + "max/min=" +
                                          num(hi / lo) + " < 10"});
  }

  {
    const auto tmp = std::filesystem::temp_directory_path() / "mobisense_acceptance";
    std::filesystem::remove_all(tmp);
    std::vector<std::string> bodies;
    for (int workers : {1, 1, 4}) {
      const ExperimentConfig config = scenario_config(2, 16);
      const auto dir = tmp / ("run" + std::to_string(bodies.size()));
      write_sweep_outputs(dir, config, run_sweep(config, workers));
      bodies.push_back(read_file(dir / "sweep.csv"));
    }
    std::filesystem::remove_all(tmp);
    const bool ok = !bodies[0].empty() && bodies[0] == bodies[1] && bodies[0] == bodies[2];
    lines.push_back({10, ok, "sweep.csv identical across 2 runs x1 worker and 1 run x4 workers: " +
                                 std::string(ok ? "yes" : "no")});
  }

  bool all = true;
  for (const auto& line : lines) {
    all = all && line.passed;
    std::cout << "criterion " << line.id << ": " << (line.passed ? "PASS" : "FAIL") << "  "
              << line.detail << '\n';
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << "elapsed " << num(seconds, 3) << " s\n";
  return all ? 0 : 1;
}
