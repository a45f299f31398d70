#pragma once

#include <stdexcept>
#include <string>

namespace finsler {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point, direction or parameter lies outside the domain of a formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A complex square root argument sits on the principal branch cut.
class BranchError : public Error {
 public:
  using Error::Error;
};

/// y = 0 was passed where a nonzero tangent vector is required.
class DegenerateDirection : public Error {
 public:
  using Error::Error;
};

/// The fundamental tensor (or a denominator derived from it) is not invertible.
class SingularTensor : public Error {
 public:
  using Error::Error;
};

/// A structural requirement of an operation is not met (e.g. beta not closed).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Finite-difference results at h and h/2 disagree beyond tolerance.
class StepTooLarge : public Error {
 public:
  using Error::Error;
};

/// The geodesic integrator's F-monitor drifted too far.
class StepInstability : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent configuration input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace finsler
