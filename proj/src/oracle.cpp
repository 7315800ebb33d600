#include "mobisense/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "mobisense/errors.hpp"
#include "mobisense/field.hpp"

namespace mobisense {

namespace {

using State = std::vector<Complex>;

// Companion-form right-hand side of p(d/dt) a = symbol * a.
State derivative(const std::span<const double> p, Complex symbol,
                 const State& y) {
  const std::size_t m = y.size();
  State dy(m);
  for (std::size_t j = 0; j + 1 < m; ++j) dy[j] = y[j + 1];
  Complex top = symbol * y[0];
  for (std::size_t i = 0; i < m; ++i) top -= p[i] * y[i];
  dy[m - 1] = top / p[m];
  return dy;
}

State axpy(const State& y, double h, const State& k) {
  State out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] + h * k[i];
  return out;
}

}  // namespace

OdeTrajectory integrate_coefficient_ode(
    const PdeSpec& spec, int k, std::span<const Complex> derivative_conditions,
    double t_end, double dt) {
  const auto p = spec.p();
  if (p.back() == 0.0) throw DegenerateOrder("leading coefficient of p is zero");
  const auto m = static_cast<std::size_t>(spec.order());
  if (derivative_conditions.size() != m) {
    throw ConfigInvalid("expected one initial derivative per temporal order");
  }
  if (!(dt > 0.0) || !(t_end >= dt)) {
    throw ConfigInvalid("RK4 needs dt > 0 and t_end >= dt");
  }

  const Complex symbol = spec.spatial_symbol(k);
  const auto steps = static_cast<long>(std::ceil(t_end / dt - 1e-9));

  OdeTrajectory traj;
  traj.k = k;
  traj.step = dt;
  traj.times.reserve(steps + 1);
  traj.values.reserve(steps + 1);

  State y(derivative_conditions.begin(), derivative_conditions.end());
  traj.times.push_back(0.0);
  traj.values.push_back(y[0]);
  for (long s = 1; s <= steps; ++s) {
    const double t_next = s == steps ? t_end : s * dt;
    const double h = t_next - traj.times.back();
    const State k1 = derivative(p, symbol, y);
    const State k2 = derivative(p, symbol, axpy(y, h / 2, k1));
    const State k3 = derivative(p, symbol, axpy(y, h / 2, k2));
    const State k4 = derivative(p, symbol, axpy(y, h, k3));
    for (std::size_t i = 0; i < m; ++i) {
      y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    traj.times.push_back(t_next);
    traj.values.push_back(y[0]);
  }
  return traj;
}

double bandlimit_preservation_check(
    const PdeSpec& spec, int band, int k_probe_max, double t_end, double dt,
    const std::map<int, std::vector<Complex>>& conditions) {
  const auto m = static_cast<std::size_t>(spec.order());
  double worst = 0.0;
  for (int k = -k_probe_max; k <= k_probe_max; ++k) {
    if (std::abs(k) <= band) continue;
    std::vector<Complex> initial(m, Complex(0.0));
    if (const auto it = conditions.find(k); it != conditions.end()) {
      initial = it->second;
    }
    const auto traj = integrate_coefficient_ode(spec, k, initial, t_end, dt);
    for (const auto& v : traj.values) worst = std::max(worst, std::abs(v));
  }
  return worst;
}

std::vector<ScalingRow> deviation_scaling(const RenewalSpec& templ,
                                           HorizonPolicy policy,
                                           std::span<const int> densities,
                                           int trials,
                                           std::uint64_t master_seed) {
  if (trials < 1) throw ConfigInvalid("trials must be positive");
  std::vector<ScalingRow> table;
  for (const int n : densities) {
    RenewalSpec spec = templ;
    spec.density = n;
    double spatial = 0.0;
    double temporal = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
      auto xs = make_stream(master_seed, n, trial, StreamTag::kSpatial);
      auto ts = make_stream(master_seed, n, trial, StreamTag::kTemporal);
      const auto dev = grid_deviation(draw_path(spec, policy, xs, ts));
      spatial += dev.spatial;
      temporal += dev.temporal;
    }
    table.push_back({n, n * spatial / trials, n * temporal / trials});
  }
  return table;
}

namespace {

constexpr ScenarioId kCatalogFields[] = {ScenarioId::kSet1, ScenarioId::kSet2,
                                         ScenarioId::kDiffusion};

FieldState catalog_field(int index) {
  return scenario_field(kCatalogFields[index - 1], catalog_pde(index));
}

// max over in-band k and grid times of |closed form - RK4|.
double rk4_deviation(const FieldState& field, double horizon, double dt) {
  const int m = field.order();
  const int b = field.band();
  double worst = 0.0;
  for (int k = -b; k <= b; ++k) {
    const auto& roots = field.roots(k);
    std::vector<Complex> modal(m);
    for (int i = 0; i < m; ++i) modal[i] = field.modal()(k + b, i);
    // d^j/dt^j at 0 of sum_i a_i e^{r_i t}
    std::vector<Complex> conditions(m, Complex(0.0));
    for (int i = 0; i < m; ++i) {
      Complex power = 1.0;
      for (int j = 0; j < m; ++j) {
        conditions[j] += modal[i] * power;
        power *= roots.roots[i];
      }
    }
    const auto traj =
        integrate_coefficient_ode(field.pde(), k, conditions, horizon, dt);
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
      worst = std::max(
          worst, std::abs(evolve_coefficient(modal, roots, traj.times[s]) -
                          traj.values[s]));
    }
  }
  return worst;
}

std::string sci(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

double max_over_min(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi / *lo;
}

}  // namespace

std::vector<CheckResult> verify_ode(const OdeSuiteOptions& options) {
  std::vector<CheckResult> rows;
  for (int index = 1; index <= 3; ++index) {
    const FieldState field = catalog_field(index);
    const std::string tag = "scenario " + std::to_string(index);
    const double err = rk4_deviation(field, options.horizon, options.dt);
    rows.push_back({tag + " rk4 vs closed form (dt=" + sci(options.dt) + ")",
                    err, "< 1e-6", err < 1e-6});
    const double coarse = rk4_deviation(field, options.horizon, options.order_dt);
    const double fine = rk4_deviation(field, options.horizon, options.order_dt / 2);
    const double ratio = coarse / fine;
    rows.push_back({tag + " error ratio when dt halves (dt=" +
                        sci(options.order_dt) + ")",
                    ratio, "in [8, 32]", ratio >= 8.0 && ratio <= 32.0});
  }
  return rows;
}

std::vector<CheckResult> verify_bandlimit(std::uint64_t seed) {
  std::vector<CheckResult> rows;
  constexpr int kBand = 3;
  constexpr int kProbe = 2 * kBand + 4;
  double worst_zero = 0.0;
  double weakest_injected = std::numeric_limits<double>::infinity();
  for (int index = 1; index <= 3; ++index) {
    const PdeSpec pde = catalog_pde(index);
    worst_zero = std::max(
        worst_zero, bandlimit_preservation_check(pde, kBand, kProbe, 1.0, 1e-3, {}));
    std::map<int, std::vector<Complex>> injected;
    injected[kBand + 2] = std::vector<Complex>(pde.order(), Complex(0.0));
    injected[kBand + 2][0] = 1e-3;
    weakest_injected = std::min(
        weakest_injected,
        bandlimit_preservation_check(pde, kBand, kProbe, 1.0, 1e-3, injected));
  }
  rows.push_back({"out-of-band magnitude, zero start (all scenarios)", worst_zero,
                  "< 1e-12", worst_zero < 1e-12});

  Rng rng(seed);
  std::normal_distribution<double> gauss;
  double largest = 0.0;
  int solved = 0;
  while (solved < 100) {
    HarmonicRoots h;
    const int m = 1 + solved % 4;
    for (int i = 0; i < m; ++i) h.roots.emplace_back(gauss(rng), gauss(rng));
    std::vector<Complex> zero(m, Complex(0.0));
    try {
      for (const auto& a : solve_initial_coefficients(h, zero)) {
        largest = std::max(largest, std::abs(a));
      }
      ++solved;
    } catch (const DegenerateRoots&) {
      // nearly repeated draw, take another
    }
  }
  rows.push_back({"zero conditions -> zero coefficients (100 root sets)", largest,
                  "== 0", largest == 0.0});
  rows.push_back({"negative control: injected out-of-band energy",
                  weakest_injected, "> 0", weakest_injected > 0.0});
  return rows;
}

std::vector<CheckResult> verify_scaling(const ScalingSuiteOptions& options) {
  std::vector<CheckResult> rows;
  RenewalSpec templ;  // uniform_scaled, lambda = mu = 2
  const auto table = deviation_scaling(templ, HorizonPolicy::kLastSample,
                                        options.densities, options.trials,
                                        options.seed);
  std::vector<double> spatial;
  std::vector<double> temporal;
  for (const auto& row : table) {
    spatial.push_back(row.scaled_spatial);
    temporal.push_back(row.scaled_temporal);
    rows.push_back({"n=" + std::to_string(row.density) + " n*E[spatial dev]",
                    row.scaled_spatial, "finite, >= 0",
                    std::isfinite(row.scaled_spatial) && row.scaled_spatial >= 0.0});
    rows.push_back({"n=" + std::to_string(row.density) + " n*E[temporal dev]",
                    row.scaled_temporal, "finite, >= 0",
                    std::isfinite(row.scaled_temporal) && row.scaled_temporal >= 0.0});
  }
  const double rs = max_over_min(spatial);
  const double rt = max_over_min(temporal);
  rows.push_back({"spatial column max/min", rs, "< 3", rs < 3.0});
  rows.push_back({"temporal column max/min", rt, "< 3", rt < 3.0});

  // Per-path invariants over a spread of densities, families and policies.
  int violations = 0;
  for (int i = 0; i < options.fuzz_paths; ++i) {
    RenewalSpec spec;
    spec.density = 20 + (i * 37) % 5000;
    if (i % 2 == 1) {
      spec.family = RenewalFamily::kBetaScaled;
      spec.lambda = 1.1 + (i % 9) * 0.2;
      spec.mu = 1.1 + (i % 7) * 0.25;
      spec.density = std::max(
          spec.density, static_cast<int>(std::ceil(10 * std::max(spec.lambda, spec.mu))));
    }
    const auto policy = (i / 2) % 2 ? HorizonPolicy::kJittered : HorizonPolicy::kLastSample;
    auto xs = make_stream(options.seed ^ 0xf00du, spec.density, i, StreamTag::kSpatial);
    auto ts = make_stream(options.seed ^ 0xf00du, spec.density, i, StreamTag::kTemporal);
    const auto path = draw_path(spec, policy, xs, ts);
    const int m = path.count;
    const double n = spec.density;
    const double slack = path.slack();
    const bool ok = m > n / spec.lambda - 1.0 && path.positions[m - 1] <= 1.0 &&
                    1.0 < path.positions[m] && path.times[m - 1] <= path.horizon &&
                    path.horizon < path.times[m] && slack >= 0.0 &&
                    slack <= spec.mu / n;
    if (!ok) ++violations;
  }
  rows.push_back({"path invariant violations (" + std::to_string(options.fuzz_paths) +
                      " paths)",
                  static_cast<double>(violations), "== 0", violations == 0});

  for (const int n : options.wald_densities) {
    RenewalSpec spec;
    spec.density = n;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < options.wald_draws; ++i) {
      auto xs = make_stream(options.seed ^ 0xa1dU, n, i, StreamTag::kSpatial);
      auto ts = make_stream(options.seed ^ 0xa1dU, n, i, StreamTag::kTemporal);
      const double m = draw_path(spec, HorizonPolicy::kLastSample, xs, ts).count;
      sum += m;
      sum_sq += m * m;
    }
    const double draws = options.wald_draws;
    const double mean = sum / draws;
    const double se =
        std::sqrt(std::max(0.0, (sum_sq - draws * mean * mean) / (draws - 1)) / draws);
    const double lo = n - 1 - 3 * se;
    const double hi = n + spec.lambda - 1 + 3 * se;
    rows.push_back({"n=" + std::to_string(n) + " E[M]", mean,
                    "in [" + sci(lo) + ", " + sci(hi) + "]",
                    mean > lo && mean <= hi});
  }
  return rows;
}

void print_report(std::ostream& out, const std::string& title,
                  const std::vector<CheckResult>& rows) {
  std::size_t width = 5;
  for (const auto& r : rows) width = std::max(width, r.name.size());
  out << title << '\n';
  out << std::left << std::setw(static_cast<int>(width)) << "check"
      << "  " << std::setw(14) << "value" << "  " << std::setw(22) << "bound"
      << "  result\n";
  for (const auto& r : rows) {
    std::ostringstream value;
    value << std::setprecision(6) << r.value;
    out << std::left << std::setw(static_cast<int>(width)) << r.name << "  "
        << std::setw(14) << value.str() << "  " << std::setw(22) << r.bound
        << "  " << (r.passed ? "PASS" : "FAIL") << '\n';
  }
}

}  // namespace mobisense
