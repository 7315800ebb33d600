#include "mobisense/sampling.hpp"

#include <cmath>
#include <ostream>

#include "mobisense/errors.hpp"
#include "mobisense/format.hpp"

namespace mobisense {

RenewalFamily parse_renewal_family(const std::string& name) {
  if (name == "uniform_scaled") return RenewalFamily::kUniformScaled;
  if (name == "beta_scaled") return RenewalFamily::kBetaScaled;
  if (name == "deterministic") return RenewalFamily::kDeterministic;
  throw ConfigInvalid("unknown renewal family '" + name + "'");
}

std::string to_string(RenewalFamily family) {
  switch (family) {
    case RenewalFamily::kUniformScaled:
      return "uniform_scaled";
    case RenewalFamily::kBetaScaled:
      return "beta_scaled";
    case RenewalFamily::kDeterministic:
      return "deterministic";
  }
  return "?";
}

HorizonPolicy parse_horizon_policy(const std::string& name) {
  if (name == "last_sample") return HorizonPolicy::kLastSample;
  if (name == "jittered") return HorizonPolicy::kJittered;
  throw ConfigInvalid("unknown horizon policy '" + name + "'");
}

std::string to_string(HorizonPolicy policy) {
  return policy == HorizonPolicy::kLastSample ? "last_sample" : "jittered";
}

NoiseFamily parse_noise_family(const std::string& name) {
  if (name == "none") return NoiseFamily::kNone;
  if (name == "gaussian") return NoiseFamily::kGaussian;
  if (name == "uniform") return NoiseFamily::kUniform;
  throw ConfigInvalid("unknown noise family '" + name + "'");
}

std::string to_string(NoiseFamily family) {
  switch (family) {
    case NoiseFamily::kNone:
      return "none";
    case NoiseFamily::kGaussian:
      return "gaussian";
    case NoiseFamily::kUniform:
      return "uniform";
  }
  return "?";
}

void RenewalSpec::validate() const {
  if (density <= 0) throw ConfigInvalid("sampling density n must be positive");
  // The deterministic grid ignores lambda and mu.
  if (family == RenewalFamily::kDeterministic) return;
  if (!(lambda > 1.0) || !(mu > 1.0)) {
    throw ConfigInvalid("support parameters lambda and mu must exceed 1");
  }
  if (lambda > density / 10.0 || mu > density / 10.0) {
    throw ConfigInvalid("lambda and mu must not exceed n/10");
  }
  if (family == RenewalFamily::kUniformScaled && (lambda > 2.0 || mu > 2.0)) {
    throw ConfigInvalid(
        "uniform_scaled cannot have mean 1/n with support parameter above 2; "
        "use beta_scaled");
  }
  if (family == RenewalFamily::kBetaScaled && !(beta_shape > 0.0)) {
    throw ConfigInvalid("beta_shape must be positive");
  }
}

void NoiseSpec::validate() const {
  if (!std::isfinite(variance) || variance < 0.0) {
    throw ConfigInvalid("noise variance must be finite and non-negative");
  }
}

double draw_increment(RenewalFamily family, double support, int density,
                      double beta_shape, Rng& rng) {
  const double n = density;
  switch (family) {
    case RenewalFamily::kDeterministic:
      return 1.0 / n;
    case RenewalFamily::kUniformScaled: {
      const double hi = support / n;
      const double lo = (2.0 - support) / n;
      return std::min(hi, lo + (hi - lo) * uniform_open_closed(rng));
    }
    case RenewalFamily::kBetaScaled: {
      std::gamma_distribution<double> ga(beta_shape, 1.0);
      std::gamma_distribution<double> gb(beta_shape * (support - 1.0), 1.0);
      for (;;) {
        const double x = ga(rng);
        const double y = gb(rng);
        const double value = support / n * (x / (x + y));
        if (value > 0.0 && std::isfinite(value)) return value;
      }
    }
  }
  return 1.0 / n;
}

SamplePath draw_path(const RenewalSpec& spec, HorizonPolicy policy,
                     Rng& spatial, Rng& temporal) {
  spec.validate();
  SamplePath path;
  const int n = spec.density;

  if (spec.family == RenewalFamily::kDeterministic) {
    // i/n rather than a running sum keeps the grid exact.
    for (int i = 1; i <= n + 1; ++i) {
      path.positions.push_back(static_cast<double>(i) / n);
      path.times.push_back(static_cast<double>(i) / n);
    }
    path.count = n;
  } else {
    double s = 0.0;
    double t = 0.0;
    while (s <= 1.0) {
      s += draw_increment(spec.family, spec.lambda, n, spec.beta_shape,
                          spatial);
      t += draw_increment(spec.family, spec.mu, n, spec.beta_shape, temporal);
      path.positions.push_back(s);
      path.times.push_back(t);
    }
    path.count = static_cast<int>(path.positions.size()) - 1;
  }

  const double last = path.times[path.count - 1];
  if (policy == HorizonPolicy::kJittered) {
    const double gap = path.times[path.count] - last;
    path.horizon = last + uniform_closed_open(temporal) * gap;
  } else {
    path.horizon = last;
  }
  return path;
}

SampleSet sample_field(const FieldState& state, const SamplePath& path,
                       const NoiseSpec& noise, Rng& rng) {
  noise.validate();
  SampleSet set;
  set.values.reserve(path.count);
  const double sigma = std::sqrt(noise.variance);
  std::normal_distribution<double> gaussian(0.0, 1.0);
  const double half_width = std::sqrt(3.0 * noise.variance);
  for (int i = 0; i < path.count; ++i) {
    double value = evaluate(state, path.positions[i], path.times[i]).real();
    switch (noise.family) {
      case NoiseFamily::kNone:
        break;
      case NoiseFamily::kGaussian:
        value += sigma * gaussian(rng);
        break;
      case NoiseFamily::kUniform:
        value += half_width * (2.0 * uniform_closed_open(rng) - 1.0);
        break;
    }
    set.values.push_back(value);
  }
  return set;
}

GridDeviation grid_deviation(const SamplePath& path) {
  GridDeviation dev;
  const int m = path.count;
  if (m < 1) return dev;
  for (int i = 1; i <= m; ++i) {
    const double ds = path.positions[i - 1] - static_cast<double>(i) / m;
    const double dt = path.times[i - 1] - i * path.horizon / m;
    dev.spatial += ds * ds;
    dev.temporal += dt * dt;
  }
  dev.spatial /= m;
  dev.temporal /= m;
  return dev;
}

void write_path_csv(std::ostream& out, const SamplePath& path,
                    const SampleSet* samples) {
  out << "i,S_i,T_i,value\n";
  for (std::size_t i = 0; i < path.positions.size(); ++i) {
    out << (i + 1) << ',' << format_double(path.positions[i]) << ','
        << format_double(path.times[i]) << ',';
    if (samples != nullptr && i < samples->values.size()) {
      out << format_double(samples->values[i]);
    }
    out << '\n';
  }
}

}  // namespace mobisense
