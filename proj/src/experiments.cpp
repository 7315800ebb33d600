#include "mobisense/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <thread>

#include "mobisense/errors.hpp"
#include "mobisense/estimator.hpp"
#include "mobisense/format.hpp"

namespace mobisense {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
  if (!obj.is_object()) throw ConfigInvalid(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      throw ConfigInvalid("unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
T get_required(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) {
    throw ConfigInvalid("missing key '" + std::string(key) + "' in " + where);
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigInvalid("bad value for '" + std::string(key) + "' in " + where +
                        ": " + e.what());
  }
}

template <typename T>
T get_optional(const json& obj, const char* key, T fallback,
               const std::string& where) {
  if (!obj.contains(key)) return fallback;
  return get_required<T>(obj, key, where);
}

ScenarioChoice parse_scenario(const json& doc) {
  ScenarioChoice choice;
  if (doc.is_string()) {
    choice.catalog = parse_scenario_id(doc.get<std::string>());
    return choice;
  }
  check_keys(doc, {"random"}, "scenario");
  const auto& random = doc.at("random");
  check_keys(random, {"seed", "band"}, "scenario.random");
  choice.random = true;
  choice.seed = get_required<std::uint64_t>(random, "seed", "scenario.random");
  choice.band = get_optional<int>(random, "band", 3, "scenario.random");
  if (choice.band < 0) throw ConfigInvalid("scenario.random.band must be >= 0");
  return choice;
}

struct TrialOutcome {
  bool solved = false;
  bool chain_ok = true;
  int samples = 0;
  double distortion = 0.0;
  double kappa = 0.0;
  double coefficient_error = 0.0;
};

TrialOutcome run_trial(const ExperimentConfig& config, const FieldState& field,
                       int n, int trial) {
  RenewalSpec spec = config.renewal;
  spec.density = n;
  auto spatial = make_stream(config.master_seed, n, trial, StreamTag::kSpatial);
  auto temporal = make_stream(config.master_seed, n, trial, StreamTag::kTemporal);
  auto noise = make_stream(config.master_seed, n, trial, StreamTag::kNoise);

  const SamplePath path = draw_path(spec, config.horizon, spatial, temporal);
  const SampleSet samples = sample_field(field, path, config.noise, noise);

  TrialOutcome outcome;
  outcome.samples = path.count;
  try {
    const auto result = reconstruct(field, path, samples);
    outcome.solved = true;
    outcome.distortion = result.distortion;
    outcome.kappa = result.kappa;
    outcome.coefficient_error = result.coefficient_error;
    const double columns = static_cast<double>(field.modes() * field.order());
    outcome.chain_ok = result.distortion <=
                       columns * result.coefficient_error * (1.0 + 1e-9) + 1e-300;
  } catch (const RankDeficient&) {
  } catch (const InsufficientSamples&) {
  }
  return outcome;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n_list.empty()) throw ConfigInvalid("n_list must not be empty");
  if (trials < 1) throw ConfigInvalid("trials must be >= 1");
  noise.validate();
  const int columns = pde.order() * (2 * scenario.band + 1);
  for (const int n : n_list) {
    if (n <= columns) {
      throw ConfigInvalid("every n must exceed m(2b+1) = " +
                          std::to_string(columns) + ", got " +
                          std::to_string(n));
    }
    RenewalSpec spec = renewal;
    spec.density = n;
    spec.validate();
  }
}

PdeSpec parse_pde(const json& doc) {
  if (doc.is_number_integer()) return catalog_pde(doc.get<int>());
  check_keys(doc, {"p", "q"}, "pde");
  return PdeSpec(get_required<std::vector<double>>(doc, "p", "pde"),
                 get_required<std::vector<double>>(doc, "q", "pde"));
}

ExperimentConfig parse_config(const json& doc) {
  check_keys(doc,
             {"scenario", "pde", "n_list", "trials", "renewal", "noise",
              "derivative_policy", "master_seed", "output_path"},
             "config");
  ExperimentConfig config;
  if (!doc.contains("scenario")) throw ConfigInvalid("missing key 'scenario'");
  if (!doc.contains("pde")) throw ConfigInvalid("missing key 'pde'");
  try {
    config.scenario = parse_scenario(doc.at("scenario"));
    config.pde = parse_pde(doc.at("pde"));
  } catch (const UnknownScenario& e) {
    throw ConfigInvalid(e.what());
  } catch (const DegenerateOrder& e) {
    throw ConfigInvalid(e.what());
  }
  config.n_list = get_required<std::vector<int>>(doc, "n_list", "config");
  std::sort(config.n_list.begin(), config.n_list.end());
  config.n_list.erase(std::unique(config.n_list.begin(), config.n_list.end()),
                      config.n_list.end());
  config.trials = get_required<int>(doc, "trials", "config");
  config.master_seed = get_required<std::uint64_t>(doc, "master_seed", "config");
  config.output_path =
      get_optional<std::string>(doc, "output_path", "out", "config");
  config.derivative_policy = parse_derivative_policy(
      get_optional<std::string>(doc, "derivative_policy", "rest", "config"));

  if (!doc.contains("renewal")) throw ConfigInvalid("missing key 'renewal'");
  const auto& renewal = doc.at("renewal");
  check_keys(renewal, {"family", "lambda", "mu", "beta_shape", "t0_policy"},
             "renewal");
  config.renewal.family = parse_renewal_family(
      get_required<std::string>(renewal, "family", "renewal"));
  config.renewal.lambda = get_optional<double>(renewal, "lambda", 2.0, "renewal");
  config.renewal.mu = get_optional<double>(renewal, "mu", 2.0, "renewal");
  config.renewal.beta_shape =
      get_optional<double>(renewal, "beta_shape", 2.0, "renewal");
  config.horizon = parse_horizon_policy(
      get_optional<std::string>(renewal, "t0_policy", "last_sample", "renewal"));

  if (!doc.contains("noise")) throw ConfigInvalid("missing key 'noise'");
  const auto& noise = doc.at("noise");
  check_keys(noise, {"family", "variance"}, "noise");
  config.noise.family =
      parse_noise_family(get_required<std::string>(noise, "family", "noise"));
  config.noise.variance = get_optional<double>(noise, "variance", 0.0, "noise");

  config.validate();
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigInvalid("cannot open config file " + file.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigInvalid("config file is not valid JSON: " + std::string(e.what()));
  }
  return parse_config(doc);
}

json to_json(const ExperimentConfig& config) {
  json scenario;
  if (config.scenario.random) {
    scenario = {{"random",
                 {{"seed", config.scenario.seed}, {"band", config.scenario.band}}}};
  } else {
    scenario = to_string(config.scenario.catalog);
  }
  const auto p = config.pde.p();
  const auto q = config.pde.q();
  return {
      {"scenario", scenario},
      {"pde",
       {{"p", std::vector<double>(p.begin(), p.end())},
        {"q", std::vector<double>(q.begin(), q.end())}}},
      {"n_list", config.n_list},
      {"trials", config.trials},
      {"renewal",
       {{"family", to_string(config.renewal.family)},
        {"lambda", config.renewal.lambda},
        {"mu", config.renewal.mu},
        {"beta_shape", config.renewal.beta_shape},
        {"t0_policy", to_string(config.horizon)}}},
      {"noise",
       {{"family", to_string(config.noise.family)},
        {"variance", config.noise.variance}}},
      {"derivative_policy", to_string(config.derivative_policy)},
      {"master_seed", config.master_seed},
      {"output_path", config.output_path},
  };
}

FieldState build_field(const ExperimentConfig& config) {
  const auto report = check_stability(config.pde, config.scenario.band);
  if (!report.feasible) {
    throw InfeasiblePde("PDE has growing modes at " +
                        std::to_string(report.offending.size()) +
                        " in-band harmonic(s)");
  }
  if (config.scenario.random) {
    Rng rng(derive_seed(config.scenario.seed, 0, 0, StreamTag::kField));
    return random_real_field(config.scenario.band, config.pde,
                             config.derivative_policy, rng);
  }
  return scenario_field(config.scenario.catalog, config.pde,
                        config.derivative_policy);
}

SweepResult run_sweep(const ExperimentConfig& config, int workers) {
  config.validate();
  const FieldState field = build_field(config);

  const int trials = config.trials;
  const auto jobs = config.n_list.size() * static_cast<std::size_t>(trials);
  std::vector<TrialOutcome> outcomes(jobs);

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t job = next++; job < jobs; job = next++) {
      const int n = config.n_list[job / trials];
      const int trial = static_cast<int>(job % trials);
      outcomes[job] = run_trial(config, field, n, trial);
    }
  };
  const int threads = std::max(1, workers);
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(work);
  }

  SweepResult result;
  for (std::size_t row_index = 0; row_index < config.n_list.size(); ++row_index) {
    SweepRow row;
    row.n = config.n_list[row_index];
    double sum = 0.0;
    double sum_sq = 0.0;
    double samples = 0.0;
    double kappa = 0.0;
    double coefficient_error = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
      const auto& out = outcomes[row_index * trials + trial];
      samples += out.samples;
      if (!out.solved) {
        ++row.rank_failures;
        continue;
      }
      ++row.successes;
      sum += out.distortion;
      sum_sq += out.distortion * out.distortion;
      kappa += out.kappa;
      coefficient_error += out.coefficient_error;
      if (!out.chain_ok) ++row.chain_violations;
    }
    row.mean_M = samples / trials;
    if (row.successes > 0) {
      const double count = row.successes;
      row.mean_distortion = sum / count;
      row.mean_kappa = kappa / count;
      row.mean_coefficient_error = coefficient_error / count;
      if (row.successes > 1) {
        const double var =
            std::max(0.0, (sum_sq - count * row.mean_distortion * row.mean_distortion) /
                              (count - 1.0));
        row.std_error = std::sqrt(var / count);
      }
    } else {
      row.mean_distortion = std::numeric_limits<double>::quiet_NaN();
      row.mean_kappa = std::numeric_limits<double>::quiet_NaN();
      row.mean_coefficient_error = std::numeric_limits<double>::quiet_NaN();
    }
    result.rows.push_back(row);
  }

  std::vector<std::pair<double, double>> points;
  for (const auto& row : result.rows) {
    if (row.successes > 0 && row.mean_distortion > 0.0) {
      points.emplace_back(row.n, row.mean_distortion);
    }
  }
  result.slope = std::numeric_limits<double>::quiet_NaN();
  result.intercept = std::numeric_limits<double>::quiet_NaN();
  if (points.size() >= 2) {
    const auto fit = fit_loglog_slope(points);
    result.slope = fit.slope;
    result.intercept = fit.intercept;
  }
  return result;
}

LogLogFit fit_loglog_slope(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2) throw DegenerateFit("need at least two points");
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const auto& [n, y] : points) {
    if (!(n > 0.0) || !(y > 0.0)) {
      throw DegenerateFit("log-log fit needs positive abscissae and ordinates");
    }
    mean_x += std::log10(n);
    mean_y += std::log10(y);
  }
  const double count = static_cast<double>(points.size());
  mean_x /= count;
  mean_y /= count;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [n, y] : points) {
    const double dx = std::log10(n) - mean_x;
    sxx += dx * dx;
    sxy += dx * (std::log10(y) - mean_y);
  }
  if (sxx == 0.0) throw DegenerateFit("all abscissae are equal");
  LogLogFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  return fit;
}

std::pair<PdeSpec, FieldState> catalog_scenario(int index) {
  static constexpr ScenarioId kFields[] = {ScenarioId::kSet1, ScenarioId::kSet2,
                                           ScenarioId::kDiffusion};
  PdeSpec pde = catalog_pde(index);
  FieldState field = scenario_field(kFields[index - 1], pde);
  return {std::move(pde), std::move(field)};
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "n,mean_distortion,stderr,mean_M,mean_kappa,rank_failures\n";
  for (const auto& row : result.rows) {
    out << row.n << ',' << format_double(row.mean_distortion) << ','
        << format_double(row.std_error) << ',' << format_double(row.mean_M)
        << ',' << format_double(row.mean_kappa) << ',' << row.rank_failures
        << '\n';
  }
}

json sweep_summary(const ExperimentConfig& config, const SweepResult& result) {
  auto finite_or_null = [](double v) -> json {
    return std::isfinite(v) ? json(v) : json(nullptr);
  };
  int chain_violations = 0;
  for (const auto& row : result.rows) chain_violations += row.chain_violations;
  return {
      {"slope", finite_or_null(result.slope)},
      {"intercept", finite_or_null(result.intercept)},
      {"chain_bound_violations", chain_violations},
      {"config", to_json(config)},
      {"version", kVersion},
  };
}

void write_sweep_outputs(const std::filesystem::path& dir,
                         const ExperimentConfig& config,
                         const SweepResult& result) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(dir / "sweep.csv", std::ios::binary);
    write_sweep_csv(csv, result);
    if (!csv) throw Error("failed to write " + (dir / "sweep.csv").string());
  }
  std::ofstream summary(dir / "summary.json", std::ios::binary);
  summary << sweep_summary(config, result).dump(2) << '\n';
  if (!summary) throw Error("failed to write " + (dir / "summary.json").string());
}

}  // namespace mobisense
