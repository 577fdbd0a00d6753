#pragma once

#include <stdexcept>
#include <string>

namespace kgfv {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed, missing, or inconsistent configuration input.
// CLI maps this to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A physics precondition is violated (e.g. sub-rest-mass energy, packet
// overlapping the step, asymmetric grid for a parity operation).
// CLI maps this to exit code 3.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// The computation itself failed: non-finite values produced, a refused
// time step, a singular matching system. CLI maps this to exit code 4.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace kgfv
