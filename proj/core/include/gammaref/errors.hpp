#pragma once

#include <stdexcept>
#include <string>

namespace gammaref {

/// Configuration / argument errors. CLI maps these to exit code 1.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Internal invariant breaches. CLI maps these to exit code 3.
struct InternalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridTooLarge : ConfigError {
  using ConfigError::ConfigError;
};
struct LengthMismatch : ConfigError {
  using ConfigError::ConfigError;
};
struct NonZeroStart : ConfigError {
  using ConfigError::ConfigError;
};
struct S0OutOfRange : ConfigError {
  using ConfigError::ConfigError;
};
struct GammaOutOfRange : ConfigError {
  using ConfigError::ConfigError;
};
struct RegimeMismatch : ConfigError {
  using ConfigError::ConfigError;
};
struct ParamOutOfRange : ConfigError {
  using ConfigError::ConfigError;
};
struct BadExpansionSpec : ConfigError {
  using ConfigError::ConfigError;
};
struct OutOfTriangle : ConfigError {
  using ConfigError::ConfigError;
};
struct SOutOfRange : ConfigError {
  using ConfigError::ConfigError;
};
struct TooFewObservations : ConfigError {
  using ConfigError::ConfigError;
};

/// The circulant embedding of fGn produced an eigenvalue below -1e-10.
/// Unreachable for valid Hurst indices; treated as an invariant breach.
struct NegativeEigenvalue : InternalError {
  using InternalError::InternalError;
};

/// Raised when a rare-event estimate has zero hits. Carries the implied
/// 95%-style upper bound 3/n so callers can report it. CLI exit code 2.
struct InfeasibleRareEvent : std::runtime_error {
  InfeasibleRareEvent(const std::string& what, double bound)
      : std::runtime_error(what), implied_upper_bound(bound) {}
  double implied_upper_bound;
};

}  // namespace gammaref
