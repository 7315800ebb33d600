#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "mobisense/errors.hpp"
#include "mobisense/pde_core.hpp"
#include "mobisense/rng.hpp"
#include "support/oracles.hpp"

using namespace mobisense;

namespace {

const double kTwoPi = 2.0 * std::numbers::pi;

PdeSpec diffusion() { return PdeSpec({0.0, 1.0}, {0.0, 0.0, 0.01}); }

// Random PDE with degree-1..4 temporal part; generic, so roots are distinct.
PdeSpec random_pde(Rng& rng) {
  std::uniform_int_distribution<int> degree(1, 4);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  std::vector<double> p(degree(rng) + 1);
  for (auto& c : p) c = coeff(rng);
  p.back() = 0.5 + std::abs(coeff(rng));
  std::vector<double> q(degree(rng) + 1);
  for (auto& c : q) c = 0.05 * coeff(rng);
  q.back() = q.back() == 0.0 ? 0.01 : q.back();
  return PdeSpec(p, q);
}

}  // namespace

TEST_SUITE("pde_core") {
  TEST_CASE("eval_poly examples") {
    const std::vector<double> identity{0.0, 1.0};
    CHECK(eval_poly(identity, Complex(-0.39478, 0.0)) == Complex(-0.39478, 0.0));

    const std::vector<double> q{0.0, 0.0, 0.01};
    const Complex value = eval_poly(q, Complex(0.0, kTwoPi));
    CHECK(value.real() == doctest::Approx(-0.394784176).epsilon(1e-9));
    CHECK(std::abs(value.imag()) < 1e-15);

    const std::vector<double> constant{3.0, 0.0};
    CHECK(eval_poly(constant, Complex(1.7, -4.2)) == Complex(3.0, 0.0));
  }

  TEST_CASE("PdeSpec rejects degenerate input") {
    CHECK_THROWS_AS(PdeSpec({1.0}, {1.0}), DegenerateOrder);
    CHECK_THROWS_AS(PdeSpec({1.0, 0.0}, {1.0}), DegenerateOrder);
    CHECK_THROWS_AS(PdeSpec({0.0, 1.0}, {1.0, 0.0}), ConfigInvalid);
    CHECK_THROWS_AS(PdeSpec({0.0, NAN}, {1.0}), ConfigInvalid);
  }

  TEST_CASE("characteristic roots of the catalog PDEs") {
    SUBCASE("first order forces r = q(j 2 pi k)") {
      const auto roots = characteristic_roots(diffusion(), 1);
      REQUIRE(roots.roots.size() == 1);
      CHECK(roots.roots[0].real() == doctest::Approx(-0.394784176).epsilon(1e-9));
    }
    SUBCASE("damped wave, k = 1") {
      const auto roots = characteristic_roots(catalog_pde(2), 1);
      REQUIRE(roots.roots.size() == 2);
      // Quadratic formula on r^2 + 3r + 0.394784176 = 0.
      CHECK(roots.roots[0].real() == doctest::Approx(-2.862063076).epsilon(1e-9));
      CHECK(roots.roots[1].real() == doctest::Approx(-0.137936924).epsilon(1e-9));
    }
    SUBCASE("fourth-order dispersion, k = 1") {
      const PdeSpec pde = catalog_pde(1);
      CHECK(pde.spatial_symbol(1).real() == doctest::Approx(-0.589602358).epsilon(1e-9));
      const auto roots = characteristic_roots(pde, 1);
      CHECK(roots.roots[0].real() == doctest::Approx(-2.788564178).epsilon(1e-9));
      CHECK(roots.roots[1].real() == doctest::Approx(-0.211435822).epsilon(1e-9));
    }
    SUBCASE("complex pair matches the closed form") {
      const PdeSpec pde = catalog_pde(1);
      const double c = -pde.spatial_symbol(3).real();
      const auto [lo, hi] = testing::quadratic_roots(3.0, c);
      const auto roots = characteristic_roots(pde, 3);
      // Sorted by (Re, Im): negative imaginary part first.
      const Complex expected_first = lo.imag() < hi.imag() ? lo : hi;
      const Complex expected_second = lo.imag() < hi.imag() ? hi : lo;
      CHECK(std::abs(roots.roots[0] - expected_first) < 1e-12);
      CHECK(std::abs(roots.roots[1] - expected_second) < 1e-12);
    }
  }

  TEST_CASE("repeated roots are rejected") {
    // p(r) - q0 = (r + 1)^2.
    const PdeSpec pde({2.0, 2.0, 1.0}, {1.0});
    CHECK_THROWS_AS(characteristic_roots(pde, 0), DegenerateRoots);
    CHECK_THROWS_AS(check_stability(pde, 2), DegenerateRoots);
  }

  TEST_CASE("check_stability") {
    SUBCASE("diffusion is feasible") {
      const auto report = check_stability(diffusion(), 3);
      CHECK(report.feasible);
      CHECK(report.offending.empty());
      for (int k = -3; k <= 3; ++k) {
        CHECK(report.worst_real_part.at(k) ==
              doctest::Approx(-0.01 * kTwoPi * kTwoPi * k * k).epsilon(1e-12));
      }
    }
    SUBCASE("anti-diffusion is not") {
      const auto report = check_stability(PdeSpec({0.0, 1.0}, {0.0, 0.0, -0.01}), 1);
      CHECK_FALSE(report.feasible);
      CHECK(report.offending == std::vector<int>{-1, 1});
      CHECK(report.worst_real_part.at(1) == doctest::Approx(0.394784176).epsilon(1e-9));
    }
    SUBCASE("a zero root is allowed") {
      const auto report = check_stability(diffusion(), 0);
      CHECK(report.feasible);
      CHECK(report.worst_real_part.at(0) == 0.0);
    }
    SUBCASE("all catalog PDEs are feasible at band 3") {
      for (int index = 1; index <= 3; ++index) {
        CHECK(check_stability(catalog_pde(index), 3).feasible);
      }
    }
    CHECK_THROWS_AS(check_stability(diffusion(), -1), ConfigInvalid);
  }

  TEST_CASE("solve_initial_coefficients") {
    SUBCASE("homogeneous system") {
      const HarmonicRoots roots{0, {Complex(-1.0), Complex(-2.5, 1.0), Complex(-0.3, -4.0)}};
      const std::vector<Complex> zero(3, Complex(0.0));
      for (const auto& a : solve_initial_coefficients(roots, zero)) {
        CHECK(a == Complex(0.0));
      }
    }
    SUBCASE("2x2 closed form") {
      const HarmonicRoots roots{0, {Complex(-2.0), Complex(-1.0)}};
      const std::vector<Complex> c{1.0, 0.0};
      const auto a = solve_initial_coefficients(roots, c);
      // 2 e^{-t} - e^{-2t}: root -2 carries -1, root -1 carries 2.
      CHECK(std::abs(a[0] - Complex(-1.0)) < 1e-14);
      CHECK(std::abs(a[1] - Complex(2.0)) < 1e-14);
    }
    SUBCASE("1x1") {
      const HarmonicRoots roots{1, {Complex(-0.394784)}};
      const std::vector<Complex> c{0.11};
      CHECK(solve_initial_coefficients(roots, c)[0] == Complex(0.11));
    }
    SUBCASE("wrong length and coincident roots") {
      const HarmonicRoots roots{0, {Complex(-1.0), Complex(-1.0)}};
      const std::vector<Complex> c{1.0, 0.0};
      CHECK_THROWS_AS(solve_initial_coefficients(roots, c), DegenerateRoots);
      const std::vector<Complex> short_c{1.0};
      CHECK_THROWS_AS(solve_initial_coefficients(roots, short_c), ConfigInvalid);
    }
  }

  TEST_CASE("evolve_coefficient") {
    const auto roots = characteristic_roots(diffusion(), 1);
    const std::vector<Complex> a{Complex(0.023, -0.076)};
    CHECK(evolve_coefficient(a, roots, 0.0) == a[0]);
    // (0.023 - j0.076) * exp(-0.0394784176 * 10).
    const Complex at_one = evolve_coefficient(a, roots, 1.0);
    CHECK(at_one.real() == doctest::Approx(0.015497985378).epsilon(1e-9));
    CHECK(at_one.imag() == doctest::Approx(-0.051210734294).epsilon(1e-9));

    const HarmonicRoots oscillating{2, {Complex(0.0, 3.0), Complex(0.0, -7.0)}};
    const std::vector<Complex> b{Complex(0.4, 0.0), Complex(0.0, 0.0)};
    for (double t : {0.0, 0.3, 1.7, 25.0}) {
      CHECK(std::abs(evolve_coefficient(b, oscillating, t)) ==
            doctest::Approx(0.4).epsilon(1e-14));
    }
  }

  TEST_CASE("catalog") {
    const PdeSpec third = catalog_pde(3);
    CHECK(std::vector<double>(third.p().begin(), third.p().end()) ==
          std::vector<double>{0.0, 1.0});
    CHECK(std::vector<double>(third.q().begin(), third.q().end()) ==
          std::vector<double>{0.0, 0.0, 0.01});
    CHECK(eval_poly(catalog_pde(1).q(), Complex(1.0)).real() ==
          doctest::Approx(0.009875).epsilon(1e-12));
    CHECK_THROWS_AS(catalog_pde(0), UnknownScenario);
    CHECK_THROWS_AS(catalog_pde(4), UnknownScenario);
  }

  TEST_CASE("root properties over random PDEs") {
    Rng rng(17);
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const PdeSpec pde = random_pde(rng);
      for (int k = -4; k <= 4; ++k) {
        HarmonicRoots roots, mirrored;
        try {
          roots = characteristic_roots(pde, k);
          mirrored = characteristic_roots(pde, -k);
        } catch (const DegenerateRoots&) {
          continue;
        }
        ++checked;
        const Complex symbol = pde.spatial_symbol(k);
        REQUIRE(static_cast<int>(roots.roots.size()) == pde.order());
        for (const auto& r : roots.roots) {
          CHECK(std::abs(eval_poly(pde.p(), r) - symbol) <=
                1e-8 * (1.0 + std::abs(symbol)));
        }
        CHECK(std::is_sorted(roots.roots.begin(), roots.roots.end(),
                             [](Complex a, Complex b) {
                               return a.real() != b.real() ? a.real() < b.real()
                                                           : a.imag() < b.imag();
                             }));

        // Real coefficients: roots at -k are the conjugates of roots at k.
        std::vector<Complex> conj_roots;
        for (const auto& r : roots.roots) conj_roots.push_back(std::conj(r));
        for (const auto& r : mirrored.roots) {
          const auto nearest = std::min_element(
              conj_roots.begin(), conj_roots.end(), [&](Complex a, Complex b) {
                return std::abs(a - r) < std::abs(b - r);
              });
          CHECK(std::abs(*nearest - r) < 1e-9 * (1.0 + std::abs(r)));
        }

        // Solving for given derivatives and differentiating back.
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::vector<Complex> conditions(pde.order());
        for (auto& c : conditions) c = Complex(u(rng), u(rng));
        const auto modal = solve_initial_coefficients(roots, conditions);
        for (int j = 0; j < pde.order(); ++j) {
          Complex derivative = 0.0;
          for (std::size_t i = 0; i < modal.size(); ++i) {
            derivative += modal[i] * std::pow(roots.roots[i], j);
          }
          CHECK(std::abs(derivative - conditions[j]) <=
                1e-9 * (1.0 + std::abs(conditions[j])) * (1.0 + std::abs(derivative)));
        }
        CHECK(std::abs(evolve_coefficient(modal, roots, 0.0) - conditions[0]) <=
              1e-9 * (1.0 + std::abs(conditions[0])));

        // Decay envelope for strictly stable harmonics.
        if (roots.max_real_part() < 0.0) {
          double magnitude = 0.0;
          for (const auto& a : modal) magnitude += std::abs(a);
          for (double t : {0.5, 2.0, 7.0}) {
            CHECK(std::abs(evolve_coefficient(modal, roots, t)) <=
                  magnitude * std::exp(roots.max_real_part() * t) * (1.0 + 1e-12));
          }
        }
      }
    }
    CHECK(checked > 1000);
  }
}
