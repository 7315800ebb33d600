#pragma once

#include <complex>
#include <map>
#include <span>
#include <vector>

namespace mobisense {

using Complex = std::complex<double>;

// Roots closer than kDistinctTolerance * (1 + max|r|) count as repeated.
inline constexpr double kDistinctTolerance = 1e-6;
// Largest real part still accepted as "non-positive".
inline constexpr double kStabilityTolerance = 1e-9;

// Constant-coefficient linear PDE
//
//   sum_i p_i d^i g / dt^i = sum_i q_i d^i g / dx^i
//
// stored as the two coefficient sequences in ascending degree.
class PdeSpec {
 public:
  // Throws DegenerateOrder if p has degree < 1 or a zero leading coefficient,
  // ConfigInvalid for non-finite values or a zero leading q coefficient.
  PdeSpec(std::vector<double> p_coeffs, std::vector<double> q_coeffs);

  std::span<const double> p() const { return p_; }
  std::span<const double> q() const { return q_; }

  // Temporal order m (degree of p).
  int order() const { return static_cast<int>(p_.size()) - 1; }

  // q(j 2 pi k), the spatial symbol of harmonic k.
  Complex spatial_symbol(int k) const;

  friend bool operator==(const PdeSpec&, const PdeSpec&) = default;

 private:
  std::vector<double> p_;
  std::vector<double> q_;
};

// Horner evaluation of sum_i coeffs[i] z^i.
Complex eval_poly(std::span<const double> coeffs, Complex z);

struct HarmonicRoots {
  int k = 0;
  // Exactly m distinct roots of p(r) = q(j 2 pi k), sorted by (Re, Im).
  std::vector<Complex> roots;

  double max_real_part() const;
};

HarmonicRoots characteristic_roots(const PdeSpec& spec, int k);

struct StabilityReport {
  std::map<int, double> worst_real_part;
  bool feasible = true;
  std::vector<int> offending;
};

StabilityReport check_stability(const PdeSpec& spec, int band);

// Modal amplitudes a_k1(0)..a_km(0) whose superposition sum_i a_ki e^{r_i t}
// has the given derivatives d^j a_k / dt^j at t = 0, j = 0..m-1.
std::vector<Complex> solve_initial_coefficients(
    const HarmonicRoots& roots, std::span<const Complex> derivative_conditions);

// a_k(t) = sum_i a_ki(0) exp(r_i t).
Complex evolve_coefficient(std::span<const Complex> modal,
                           const HarmonicRoots& roots, double t);

// Built-in PDE catalog, indexed 1..3:
//   1: p = z^2 + 3z, q = 0.01 (z^2 - 0.0125 z^4)
//   2: p = z^2 + 3z, q = 0.01 z^2
//   3: p = z,        q = 0.01 z^2   (diffusion)
// Model 1 keeps 0.0125 inside the bracket. Reading it as 0.125 on the
// fourth derivative would give 0.00125 instead of 0.000125.
// Throws UnknownScenario for other indices.
PdeSpec catalog_pde(int index);

}  // namespace mobisense
