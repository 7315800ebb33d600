#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mobisense/field.hpp"
#include "mobisense/sampling.hpp"

namespace mobisense {

inline constexpr const char* kVersion = "0.1.0";

struct ScenarioChoice {
  bool random = false;
  ScenarioId catalog = ScenarioId::kDiffusion;  // used when !random
  std::uint64_t seed = 0;                       // used when random
  int band = 3;                                 // catalog fields are band 3
};

// Parameters of one density sweep. The JSON form is
//
//   {
//     "scenario": "diffusion" | "set1" | "set2"
//                 | {"random": {"seed": 7, "band": 3}},
//     "pde": 3 | {"p": [0, 1], "q": [0, 0, 0.01]},
//     "n_list": [128, 256, 512],
//     "trials": 64,
//     "renewal": {"family": "uniform_scaled", "lambda": 2, "mu": 2,
//                 "beta_shape": 2, "t0_policy": "last_sample"},
//     "noise": {"family": "gaussian", "variance": 1e-4},
//     "derivative_policy": "rest",
//     "master_seed": 1,
//     "output_path": "out"
//   }
//
// "derivative_policy", "output_path" and the "beta_shape"/"t0_policy" renewal
// keys are optional. Unknown keys anywhere are rejected.
struct ExperimentConfig {
  ScenarioChoice scenario;
  PdeSpec pde = PdeSpec({0.0, 1.0}, {0.0, 0.0, 0.01});
  std::vector<int> n_list;
  int trials = 64;
  RenewalSpec renewal;  // density is overridden per sweep point
  HorizonPolicy horizon = HorizonPolicy::kLastSample;
  NoiseSpec noise;
  DerivativePolicy derivative_policy = DerivativePolicy::kRestAtZero;
  std::uint64_t master_seed = 0;
  std::string output_path = "out";

  // Throws ConfigInvalid unless every n exceeds m(2b+1) and, for random
  // renewal families, satisfies n >= 10 max(lambda, mu).
  void validate() const;
};

ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& file);
nlohmann::json to_json(const ExperimentConfig& config);

PdeSpec parse_pde(const nlohmann::json& doc);

// The field a config describes. Throws InfeasiblePde when the PDE grows some
// in-band harmonic.
FieldState build_field(const ExperimentConfig& config);

struct SweepRow {
  int n = 0;
  double mean_distortion = 0.0;
  double std_error = 0.0;
  double mean_M = 0.0;
  double mean_kappa = 0.0;
  int rank_failures = 0;
  int successes = 0;
  double mean_coefficient_error = 0.0;  // E ||a_hat - a||^2
  int chain_violations = 0;             // distortion > m(2b+1) ||a_hat - a||^2
};

struct SweepResult {
  std::vector<SweepRow> rows;  // ascending n
  double slope = 0.0;          // NaN when fewer than two usable rows
  double intercept = 0.0;
};

// Runs every (n, trial) pair; each trial draws its own path, noise and
// reconstruction from streams keyed by (master_seed, n, trial), so the result
// is the same for any worker count.
SweepResult run_sweep(const ExperimentConfig& config, int workers = 1);

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
};

// Ordinary least squares of log10 y on log10 n. Throws DegenerateFit for
// fewer than two points, non-positive values or identical abscissae.
LogLogFit fit_loglog_slope(std::span<const std::pair<double, double>> points);

// Catalog scenario 1..3: the PDE together with the field it was simulated
// with (set1, set2 and the diffusion set respectively).
std::pair<PdeSpec, FieldState> catalog_scenario(int index);

// Header: n,mean_distortion,stderr,mean_M,mean_kappa,rank_failures
void write_sweep_csv(std::ostream& out, const SweepResult& result);

nlohmann::json sweep_summary(const ExperimentConfig& config,
                             const SweepResult& result);

// Writes sweep.csv and summary.json into `dir`, creating it if needed.
void write_sweep_outputs(const std::filesystem::path& dir,
                         const ExperimentConfig& config,
                         const SweepResult& result);

}  // namespace mobisense
