#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mobisense/field.hpp"
#include "mobisense/rng.hpp"

namespace mobisense {

// Law of the renewal increments, scaled to the density n.
//   kUniformScaled: X uniform on [(2 - lambda)/n, lambda/n], needs lambda <= 2
//                   (lambda = 2 gives the plain U * 2/n).
//   kBetaScaled:    X = (lambda/n) Beta(a, b) with a/(a+b) = 1/lambda.
//   kDeterministic: X = 1/n exactly.
// Every family has support inside (0, lambda/n] and mean 1/n; the temporal
// increments N use mu in place of lambda.
enum class RenewalFamily { kUniformScaled, kBetaScaled, kDeterministic };

RenewalFamily parse_renewal_family(const std::string& name);
std::string to_string(RenewalFamily family);

struct RenewalSpec {
  int density = 100;
  RenewalFamily family = RenewalFamily::kUniformScaled;
  double lambda = 2.0;
  double mu = 2.0;
  // Shape a of the Beta law; b follows from the mean constraint.
  double beta_shape = 2.0;

  // Throws ConfigInvalid when the spec violates the sampling assumptions.
  void validate() const;
};

// Rule that fixes the known horizon T0 from a drawn path.
enum class HorizonPolicy {
  kLastSample,  // T0 = T_M
  kJittered,    // T0 = T_M + u (T_{M+1} - T_M), u uniform on [0, 1)
};

HorizonPolicy parse_horizon_policy(const std::string& name);
std::string to_string(HorizonPolicy policy);

// Positions and times of one sensor run. Both vectors have M + 1 entries:
// the last one is the first sample past x = 1 and is never used for
// estimation.
struct SamplePath {
  std::vector<double> positions;
  std::vector<double> times;
  int count = 0;
  double horizon = 0.0;

  double slack() const { return horizon - times[count - 1]; }
};

enum class NoiseFamily { kNone, kGaussian, kUniform };

NoiseFamily parse_noise_family(const std::string& name);
std::string to_string(NoiseFamily family);

struct NoiseSpec {
  NoiseFamily family = NoiseFamily::kNone;
  double variance = 0.0;

  void validate() const;
};

// Noisy readings at the first M samples of a path.
struct SampleSet {
  std::vector<double> values;
};

// Spatial increments come from `spatial`, temporal ones (and the horizon
// jitter) from `temporal`; reseeding one stream never changes the other
// coordinate.
SamplePath draw_path(const RenewalSpec& spec, HorizonPolicy policy,
                     Rng& spatial, Rng& temporal);

double draw_increment(RenewalFamily family, double support, int density,
                      double beta_shape, Rng& rng);

SampleSet sample_field(const FieldState& state, const SamplePath& path,
                       const NoiseSpec& noise, Rng& rng);

struct GridDeviation {
  double spatial = 0.0;   // (1/M) sum |S_i - i/M|^2
  double temporal = 0.0;  // (1/M) sum |T_i - i T0/M|^2
};

GridDeviation grid_deviation(const SamplePath& path);

// CSV with header "i,S_i,T_i,value"; `samples` may be null, and the overshoot
// sample (index M+1) is written with an empty value column.
void write_path_csv(std::ostream& out, const SamplePath& path,
                    const SampleSet* samples);

}  // namespace mobisense
