#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "mobisense/pde_core.hpp"
#include "mobisense/rng.hpp"

namespace mobisense {

// How the higher temporal derivatives of a_k at t = 0 are completed when only
// the values a_k(0) are given.
enum class DerivativePolicy {
  // d^j a_k / dt^j (0) = 0 for j = 1..m-1 (field initially at rest).
  kRestAtZero,
  // a_ki(0) = a_k(0) / m for every root i.
  kEqualSplit,
};

// Fields used by the reference simulation catalog.
enum class ScenarioId { kSet1, kSet2, kDiffusion };

ScenarioId parse_scenario_id(const std::string& name);
std::string to_string(ScenarioId id);
std::string to_string(DerivativePolicy policy);
DerivativePolicy parse_derivative_policy(const std::string& name);

// Spatially bandlimited field on [0, 1] evolving under a linear PDE:
//
//   g(x, t) = sum_{k=-b}^{b} sum_{i=1}^{m} a_ki(0) e^{r_i(k) t} e^{j 2 pi k x}
//
// Immutable once built.
class FieldState {
 public:
  // modal is (2b+1) x m with row k + b holding a_k1(0)..a_km(0) in the root
  // order of characteristic_roots(pde, k). Throws InfeasiblePde if any in-band
  // root has positive real part.
  FieldState(PdeSpec pde, int band, Eigen::MatrixXcd modal, bool real_field);

  // Builds the modal matrix from the values a_k(0), k = -b..b, completing the
  // higher derivatives with `policy`.
  static FieldState from_initial_values(PdeSpec pde, int band,
                                        std::span<const Complex> values,
                                        DerivativePolicy policy,
                                        bool real_field);

  int band() const { return band_; }
  int order() const { return pde_.order(); }
  int modes() const { return 2 * band_ + 1; }
  bool real_field() const { return real_field_; }
  const PdeSpec& pde() const { return pde_; }
  const Eigen::MatrixXcd& modal() const { return modal_; }
  const HarmonicRoots& roots(int k) const { return roots_[k + band_]; }
  const std::vector<HarmonicRoots>& all_roots() const { return roots_; }

  // Stacked coefficient vector a, harmonic-major (k ascending, roots within k).
  Eigen::VectorXcd stacked() const;

  // Same field with every modal coefficient multiplied by `factor`.
  FieldState scaled(double factor) const;

 private:
  PdeSpec pde_;
  int band_;
  Eigen::MatrixXcd modal_;
  std::vector<HarmonicRoots> roots_;
  bool real_field_;
};

Complex evaluate(const FieldState& state, double x, double t);

struct FieldGradient {
  Complex d_dx;
  Complex d_dt;
};

FieldGradient evaluate_gradient(const FieldState& state, double x, double t);

// a_k(t) for k = -b..b.
std::vector<Complex> coefficients_at(const FieldState& state, double t);

// Largest |g(x, t)| over x = i / points, i = 0..points-1.
double max_abs_on_grid(const FieldState& state, double t, int points);

// Random real field: Re and Im of a_k(0), k = 0..b, drawn uniformly on
// [-1, 1] (a_0 real), mirrored by conjugate symmetry, then rescaled so that
// max |g(x, 0)| = 1 on a 4096-point grid.
FieldState random_real_field(int band, const PdeSpec& pde,
                             DerivativePolicy policy, Rng& rng);

// Catalog field with band 3 under the given PDE.
FieldState scenario_field(ScenarioId id, const PdeSpec& pde,
                          DerivativePolicy policy = DerivativePolicy::kRestAtZero);

// The catalog coefficient values a_0..a_3 (non-negative harmonics).
std::vector<Complex> scenario_values(ScenarioId id);

// Record layout:
//   {"band": b, "order": m, "p": [...], "q": [...], "real_field": bool,
//    "modal": [[[re, im], ...m], ...2b+1]}
nlohmann::json to_json(const FieldState& state);
FieldState field_from_json(const nlohmann::json& record);

}  // namespace mobisense
