#include "mobisense/pde_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "mobisense/errors.hpp"

namespace mobisense {

namespace {

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(),
                     [](double x) { return std::isfinite(x); });
}

bool root_order(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

// Evaluates c(z) and c'(z) for complex coefficients in ascending degree.
std::pair<Complex, Complex> horner_with_derivative(
    std::span<const Complex> coeffs, Complex z) {
  Complex value = 0.0;
  Complex slope = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    slope = slope * z + value;
    value = value * z + *it;
  }
  return {value, slope};
}

void require_distinct(const std::vector<Complex>& roots, int k) {
  double scale = 0.0;
  for (const auto& r : roots) scale = std::max(scale, std::abs(r));
  const double tol = kDistinctTolerance * (1.0 + scale);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      if (std::abs(roots[i] - roots[j]) < tol) {
        std::ostringstream msg;
        msg << "repeated characteristic root " << roots[i] << " at harmonic "
            << k;
        throw DegenerateRoots(msg.str());
      }
    }
  }
}

}  // namespace

PdeSpec::PdeSpec(std::vector<double> p_coeffs, std::vector<double> q_coeffs)
    : p_(std::move(p_coeffs)), q_(std::move(q_coeffs)) {
  if (!all_finite(p_) || !all_finite(q_)) {
    throw ConfigInvalid("PDE coefficients must be finite");
  }
  if (p_.size() < 2 || p_.back() == 0.0) {
    throw DegenerateOrder(
        "temporal polynomial p must have degree >= 1 and a nonzero leading "
        "coefficient");
  }
  if (q_.empty() || q_.back() == 0.0) {
    throw ConfigInvalid(
        "spatial polynomial q must be nonempty with a nonzero leading "
        "coefficient");
  }
}

Complex PdeSpec::spatial_symbol(int k) const {
  return eval_poly(q_, Complex(0.0, 2.0 * std::numbers::pi * k));
}

Complex eval_poly(std::span<const double> coeffs, Complex z) {
  Complex acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = acc * z + *it;
  }
  return acc;
}

double HarmonicRoots::max_real_part() const {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& r : roots) worst = std::max(worst, r.real());
  return worst;
}

HarmonicRoots characteristic_roots(const PdeSpec& spec, int k) {
  const int m = spec.order();
  const auto p = spec.p();

  // c(r) = p(r) - q(j 2 pi k), complex because of the constant term.
  std::vector<Complex> c(p.begin(), p.end());
  c[0] -= spec.spatial_symbol(k);

  std::vector<Complex> roots;
  roots.reserve(m);
  if (m == 1) {
    roots.push_back(-c[0] / c[1]);
  } else {
    // Companion matrix of the monic polynomial c(r) / p_m.
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(m, m);
    companion.diagonal(-1).setOnes();
    for (int i = 0; i < m; ++i) {
      companion(i, m - 1) = -c[i] / c[m];
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    if (solver.info() != Eigen::Success) {
      throw DegenerateRoots("companion eigenvalue iteration did not converge");
    }
    const auto& ev = solver.eigenvalues();
    for (int i = 0; i < m; ++i) roots.push_back(ev(i));

    // A couple of Newton steps tighten the residual of each eigenvalue.
    for (auto& r : roots) {
      for (int it = 0; it < 2; ++it) {
        const auto [value, slope] = horner_with_derivative(c, r);
        if (slope == Complex(0.0)) break;
        const Complex next = r - value / slope;
        if (std::abs(horner_with_derivative(c, next).first) >
            std::abs(value)) {
          break;
        }
        r = next;
      }
    }
  }

  std::sort(roots.begin(), roots.end(), root_order);
  require_distinct(roots, k);
  return HarmonicRoots{k, std::move(roots)};
}

StabilityReport check_stability(const PdeSpec& spec, int band) {
  if (band < 0) throw ConfigInvalid("band limit must be non-negative");
  StabilityReport report;
  for (int k = -band; k <= band; ++k) {
    const double worst = characteristic_roots(spec, k).max_real_part();
    report.worst_real_part[k] = worst;
    if (worst > kStabilityTolerance) {
      report.feasible = false;
      report.offending.push_back(k);
    }
  }
  return report;
}

std::vector<Complex> solve_initial_coefficients(
    const HarmonicRoots& roots, std::span<const Complex> derivative_conditions) {
  const int m = static_cast<int>(roots.roots.size());
  if (static_cast<int>(derivative_conditions.size()) != m) {
    throw ConfigInvalid("expected one derivative condition per root");
  }
  require_distinct(roots.roots, roots.k);

  Eigen::MatrixXcd vandermonde(m, m);
  for (int i = 0; i < m; ++i) {
    Complex power = 1.0;
    for (int j = 0; j < m; ++j) {
      vandermonde(j, i) = power;
      power *= roots.roots[i];
    }
  }
  Eigen::VectorXcd rhs(m);
  for (int j = 0; j < m; ++j) rhs(j) = derivative_conditions[j];

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(vandermonde);
  if (!(lu.rcond() > 1e-14)) {
    throw DegenerateRoots("Vandermonde system of characteristic roots is singular");
  }
  const Eigen::VectorXcd solution = lu.solve(rhs);
  return {solution.data(), solution.data() + m};
}

Complex evolve_coefficient(std::span<const Complex> modal,
                           const HarmonicRoots& roots, double t) {
  Complex acc = 0.0;
  for (std::size_t i = 0; i < modal.size(); ++i) {
    acc += modal[i] * std::exp(roots.roots[i] * t);
  }
  return acc;
}

PdeSpec catalog_pde(int index) {
  switch (index) {
    case 1:
      return PdeSpec({0.0, 3.0, 1.0}, {0.0, 0.0, 0.01, 0.0, -0.01 * 0.0125});
    case 2:
      return PdeSpec({0.0, 3.0, 1.0}, {0.0, 0.0, 0.01});
    case 3:
      return PdeSpec({0.0, 1.0}, {0.0, 0.0, 0.01});
    default:
      throw UnknownScenario("catalog PDE index must be 1, 2 or 3, got " +
                            std::to_string(index));
  }
}

}  // namespace mobisense
