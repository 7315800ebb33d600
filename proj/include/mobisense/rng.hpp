#pragma once

#include <cstdint>
#include <random>

namespace mobisense {

using Rng = std::mt19937_64;

// Independent random streams used by a single Monte Carlo trial.
enum class StreamTag : std::uint64_t {
  kSpatial = 1,
  kTemporal = 2,
  kNoise = 3,
  kField = 4,
};

// SplitMix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed for the substream identified by (master_seed, n, trial, tag). The
// result depends only on its arguments, so trials can be scheduled in any
// order on any number of workers.
constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t n,
                                    std::uint64_t trial, StreamTag tag) {
  std::uint64_t h = mix64(master_seed);
  h = mix64(h ^ n);
  h = mix64(h ^ trial);
  h = mix64(h ^ static_cast<std::uint64_t>(tag));
  return h;
}

inline Rng make_stream(std::uint64_t master_seed, std::uint64_t n,
                       std::uint64_t trial, StreamTag tag) {
  return Rng(derive_seed(master_seed, n, trial, tag));
}

// Uniform on (0, 1], built from the top 53 bits so the result is identical on
// every standard library.
inline double uniform_open_closed(Rng& rng) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
  return 1.0 - u;
}

// Uniform on [0, 1).
inline double uniform_closed_open(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace mobisense
