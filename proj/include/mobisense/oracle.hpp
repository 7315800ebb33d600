#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <span>
#include <vector>

#include "mobisense/pde_core.hpp"
#include "mobisense/rng.hpp"
#include "mobisense/sampling.hpp"

namespace mobisense {

// Brute-force checks that share no code path with the closed-form solution.

struct OdeTrajectory {
  int k = 0;
  double step = 0.0;
  std::vector<double> times;
  std::vector<Complex> values;
};

// Integrates p(d/dt) a = q(j 2 pi k) a with classical fixed-step RK4 from the
// derivatives d^j a / dt^j (0), j = 0..m-1. The final step is shortened to land
// exactly on t_end.
OdeTrajectory integrate_coefficient_ode(
    const PdeSpec& spec, int k, std::span<const Complex> derivative_conditions,
    double t_end, double dt);

// Integrates every harmonic with |k| <= k_probe_max and returns the largest
// |a_k(t)| over out-of-band harmonics (|k| > band) on the integration grid.
// `conditions` maps k to its initial derivatives; missing harmonics start at
// rest.
double bandlimit_preservation_check(
    const PdeSpec& spec, int band, int k_probe_max, double t_end, double dt,
    const std::map<int, std::vector<Complex>>& conditions);

struct ScalingRow {
  int density = 0;
  double scaled_spatial = 0.0;   // n * E[spatial deviation]
  double scaled_temporal = 0.0;  // n * E[temporal deviation]
};

// Monte Carlo estimate of the grid deviations for each density. The trial
// streams are derived from `master_seed`, so the table does not depend on how
// trials are scheduled.
std::vector<ScalingRow> deviation_scaling(const RenewalSpec& templ,
                                           HorizonPolicy policy,
                                           std::span<const int> densities,
                                           int trials,
                                           std::uint64_t master_seed);

// One line of a verification report.
struct CheckResult {
  std::string name;
  double value = 0.0;
  std::string bound;  // human-readable threshold, e.g. "< 1e-6"
  bool passed = false;
};

struct OdeSuiteOptions {
  double horizon = 1.0;
  double dt = 1e-3;
  // Step pair for the convergence-order check; coarse enough that truncation
  // error sits well above roundoff.
  double order_dt = 0.04;
};

// Closed form vs RK4 on every in-band harmonic of the catalog scenarios, plus
// the error ratio when the step is halved.
std::vector<CheckResult> verify_ode(const OdeSuiteOptions& options = {});

// Out-of-band harmonics stay at zero, zero conditions give zero modal
// coefficients on random root sets, and injected out-of-band energy is seen.
std::vector<CheckResult> verify_bandlimit(std::uint64_t seed = 1);

struct ScalingSuiteOptions {
  std::vector<int> densities{100, 400, 1600, 6400};
  int trials = 10000;
  int fuzz_paths = 10000;
  std::vector<int> wald_densities{50, 500, 5000};
  int wald_draws = 10000;
  std::uint64_t seed = 1;
};

// Deviation scaling table, per-path invariants and the Wald interval for E[M].
std::vector<CheckResult> verify_scaling(const ScalingSuiteOptions& options = {});

void print_report(std::ostream& out, const std::string& title,
                  const std::vector<CheckResult>& rows);

}  // namespace mobisense
