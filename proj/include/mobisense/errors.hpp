#pragma once

#include <stdexcept>
#include <string>

namespace mobisense {

// Base for every error raised by the library. Callers that only care about
// "something went wrong in mobisense" can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two characteristic roots of one harmonic coincide (or the Vandermonde
// system built from them is singular). Repeated roots are not supported.
class DegenerateRoots : public Error {
 public:
  using Error::Error;
};

// The leading temporal coefficient of the PDE vanishes.
class DegenerateOrder : public Error {
 public:
  using Error::Error;
};

// Some in-band harmonic has a characteristic root with positive real part.
class InfeasiblePde : public Error {
 public:
  using Error::Error;
};

class RankDeficient : public Error {
 public:
  using Error::Error;
};

class InsufficientSamples : public Error {
 public:
  using Error::Error;
};

class UnknownScenario : public Error {
 public:
  using Error::Error;
};

class ConfigInvalid : public Error {
 public:
  using Error::Error;
};

class DegenerateFit : public Error {
 public:
  using Error::Error;
};

}  // namespace mobisense
