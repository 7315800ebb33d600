#include "mobisense/field.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mobisense/errors.hpp"

namespace mobisense {

namespace {

constexpr int kNormalizationGrid = 4096;

constexpr std::array<Complex, 4> kSet1 = {
    Complex(0.3002, 0.0), Complex(-0.0413, 0.0216), Complex(0.0871, 0.0343),
    Complex(-0.1679, -0.0586)};
constexpr std::array<Complex, 4> kSet2 = {
    Complex(0.2445, 0.0), Complex(-0.0357, 0.0478), Complex(0.0978, 0.0729),
    Complex(-0.1796, -0.0756)};
constexpr std::array<Complex, 4> kDiffusionSet = {
    Complex(0.11, 0.0), Complex(0.023, -0.076), Complex(0.0669, 0.0551),
    Complex(0.2, 0.0821)};

Complex harmonic(int k, double x) {
  const double phase = 2.0 * std::numbers::pi * k * x;
  return {std::cos(phase), std::sin(phase)};
}

// Values for k = -b..b from the non-negative half by conjugate symmetry.
std::vector<Complex> mirror(std::span<const Complex> nonnegative) {
  const int band = static_cast<int>(nonnegative.size()) - 1;
  std::vector<Complex> values(2 * band + 1);
  for (int k = 0; k <= band; ++k) {
    values[band + k] = nonnegative[k];
    values[band - k] = std::conj(nonnegative[k]);
  }
  return values;
}

}  // namespace

ScenarioId parse_scenario_id(const std::string& name) {
  if (name == "set1") return ScenarioId::kSet1;
  if (name == "set2") return ScenarioId::kSet2;
  if (name == "diffusion") return ScenarioId::kDiffusion;
  throw UnknownScenario("unknown scenario '" + name +
                        "' (expected set1, set2 or diffusion)");
}

std::string to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::kSet1:
      return "set1";
    case ScenarioId::kSet2:
      return "set2";
    case ScenarioId::kDiffusion:
      return "diffusion";
  }
  return "?";
}

std::string to_string(DerivativePolicy policy) {
  return policy == DerivativePolicy::kRestAtZero ? "rest" : "equal_split";
}

DerivativePolicy parse_derivative_policy(const std::string& name) {
  if (name == "rest") return DerivativePolicy::kRestAtZero;
  if (name == "equal_split") return DerivativePolicy::kEqualSplit;
  throw ConfigInvalid("unknown derivative policy '" + name +
                      "' (expected rest or equal_split)");
}

FieldState::FieldState(PdeSpec pde, int band, Eigen::MatrixXcd modal,
                       bool real_field)
    : pde_(std::move(pde)),
      band_(band),
      modal_(std::move(modal)),
      real_field_(real_field) {
  if (band_ < 0) throw ConfigInvalid("band limit must be non-negative");
  if (modal_.rows() != modes() || modal_.cols() != order()) {
    std::ostringstream msg;
    msg << "modal matrix must be " << modes() << "x" << order() << ", got "
        << modal_.rows() << "x" << modal_.cols();
    throw ConfigInvalid(msg.str());
  }
  roots_.reserve(modes());
  for (int k = -band_; k <= band_; ++k) {
    roots_.push_back(characteristic_roots(pde_, k));
    if (roots_.back().max_real_part() > kStabilityTolerance) {
      throw InfeasiblePde("harmonic " + std::to_string(k) +
                          " has a characteristic root with positive real part");
    }
  }
}

FieldState FieldState::from_initial_values(PdeSpec pde, int band,
                                           std::span<const Complex> values,
                                           DerivativePolicy policy,
                                           bool real_field) {
  if (static_cast<int>(values.size()) != 2 * band + 1) {
    throw ConfigInvalid("expected 2b+1 initial coefficient values");
  }
  const int m = pde.order();
  Eigen::MatrixXcd modal(2 * band + 1, m);
  for (int k = -band; k <= band; ++k) {
    const Complex value = values[k + band];
    if (policy == DerivativePolicy::kEqualSplit) {
      modal.row(k + band).setConstant(value / static_cast<double>(m));
      continue;
    }
    std::vector<Complex> conditions(m, Complex(0.0));
    conditions[0] = value;
    const auto coeffs =
        solve_initial_coefficients(characteristic_roots(pde, k), conditions);
    for (int i = 0; i < m; ++i) modal(k + band, i) = coeffs[i];
  }
  return FieldState(std::move(pde), band, std::move(modal), real_field);
}

Eigen::VectorXcd FieldState::stacked() const {
  Eigen::VectorXcd a(modes() * order());
  for (int row = 0; row < modes(); ++row) {
    for (int i = 0; i < order(); ++i) a(row * order() + i) = modal_(row, i);
  }
  return a;
}

FieldState FieldState::scaled(double factor) const {
  FieldState copy = *this;
  copy.modal_ *= factor;
  return copy;
}

Complex evaluate(const FieldState& state, double x, double t) {
  Complex acc = 0.0;
  const int b = state.band();
  for (int k = -b; k <= b; ++k) {
    const auto& roots = state.roots(k).roots;
    Complex temporal = 0.0;
    for (int i = 0; i < state.order(); ++i) {
      temporal += state.modal()(k + b, i) * std::exp(roots[i] * t);
    }
    acc += temporal * harmonic(k, x);
  }
  return acc;
}

FieldGradient evaluate_gradient(const FieldState& state, double x, double t) {
  FieldGradient grad{0.0, 0.0};
  const int b = state.band();
  for (int k = -b; k <= b; ++k) {
    const auto& roots = state.roots(k).roots;
    const Complex spatial = harmonic(k, x);
    const Complex wave(0.0, 2.0 * std::numbers::pi * k);
    for (int i = 0; i < state.order(); ++i) {
      const Complex term =
          state.modal()(k + b, i) * std::exp(roots[i] * t) * spatial;
      grad.d_dx += term * wave;
      grad.d_dt += term * roots[i];
    }
  }
  return grad;
}

std::vector<Complex> coefficients_at(const FieldState& state, double t) {
  std::vector<Complex> out;
  out.reserve(state.modes());
  const int b = state.band();
  for (int k = -b; k <= b; ++k) {
    const Eigen::VectorXcd row = state.modal().row(k + b).transpose();
    out.push_back(evolve_coefficient({row.data(), static_cast<size_t>(row.size())},
                                     state.roots(k), t));
  }
  return out;
}

double max_abs_on_grid(const FieldState& state, double t, int points) {
  const auto coeffs = coefficients_at(state, t);
  const int b = state.band();
  double worst = 0.0;
  for (int j = 0; j < points; ++j) {
    const double x = static_cast<double>(j) / points;
    Complex value = 0.0;
    for (int k = -b; k <= b; ++k) value += coeffs[k + b] * harmonic(k, x);
    worst = std::max(worst, std::abs(value));
  }
  return worst;
}

FieldState random_real_field(int band, const PdeSpec& pde,
                             DerivativePolicy policy, Rng& rng) {
  if (band < 0) throw ConfigInvalid("band limit must be non-negative");
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::vector<Complex> half(band + 1);
  for (int k = 0; k <= band; ++k) {
    const double re = coeff(rng);
    const double im = coeff(rng);
    half[k] = k == 0 ? Complex(re, 0.0) : Complex(re, im);
  }
  const auto values = mirror(half);
  FieldState raw =
      FieldState::from_initial_values(pde, band, values, policy, true);
  const double peak = max_abs_on_grid(raw, 0.0, kNormalizationGrid);
  if (!(peak > 0.0)) return raw;
  return raw.scaled(1.0 / peak);
}

std::vector<Complex> scenario_values(ScenarioId id) {
  switch (id) {
    case ScenarioId::kSet1:
      return {kSet1.begin(), kSet1.end()};
    case ScenarioId::kSet2:
      return {kSet2.begin(), kSet2.end()};
    case ScenarioId::kDiffusion:
      return {kDiffusionSet.begin(), kDiffusionSet.end()};
  }
  throw UnknownScenario("unknown scenario id");
}

FieldState scenario_field(ScenarioId id, const PdeSpec& pde,
                          DerivativePolicy policy) {
  const auto half = scenario_values(id);
  const auto values = mirror(half);
  return FieldState::from_initial_values(pde, 3, values, policy, true);
}

nlohmann::json to_json(const FieldState& state) {
  nlohmann::json modal = nlohmann::json::array();
  for (int row = 0; row < state.modes(); ++row) {
    nlohmann::json entries = nlohmann::json::array();
    for (int i = 0; i < state.order(); ++i) {
      const Complex c = state.modal()(row, i);
      entries.push_back({c.real(), c.imag()});
    }
    modal.push_back(std::move(entries));
  }
  const auto p = state.pde().p();
  const auto q = state.pde().q();
  return {
      {"band", state.band()},
      {"order", state.order()},
      {"p", std::vector<double>(p.begin(), p.end())},
      {"q", std::vector<double>(q.begin(), q.end())},
      {"real_field", state.real_field()},
      {"modal", std::move(modal)},
  };
}

FieldState field_from_json(const nlohmann::json& record) {
  try {
    PdeSpec pde(record.at("p").get<std::vector<double>>(),
                record.at("q").get<std::vector<double>>());
    const int band = record.at("band").get<int>();
    const int order = record.at("order").get<int>();
    if (order != pde.order()) {
      throw ConfigInvalid("field record order does not match degree of p");
    }
    const auto& rows = record.at("modal");
    if (!rows.is_array() || static_cast<int>(rows.size()) != 2 * band + 1) {
      throw ConfigInvalid("field record modal matrix has the wrong row count");
    }
    Eigen::MatrixXcd modal(2 * band + 1, order);
    for (int row = 0; row < 2 * band + 1; ++row) {
      const auto& entries = rows[row];
      if (!entries.is_array() || static_cast<int>(entries.size()) != order) {
        throw ConfigInvalid("field record modal row has the wrong length");
      }
      for (int i = 0; i < order; ++i) {
        const auto pair = entries[i].get<std::array<double, 2>>();
        modal(row, i) = Complex(pair[0], pair[1]);
      }
    }
    return FieldState(std::move(pde), band, std::move(modal),
                      record.at("real_field").get<bool>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigInvalid(std::string("malformed field record: ") + e.what());
  }
}

}  // namespace mobisense
