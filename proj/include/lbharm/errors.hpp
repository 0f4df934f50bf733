#pragma once

#include <stdexcept>
#include <string>

namespace lbharm {

/// Argument outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Result not representable (overflow, non-finite input).
struct RangeError : std::range_error {
  using std::range_error::range_error;
};

/// Integral or constant diverges for the given parameters.
struct DivergenceError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Invalid grid or run configuration.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Sample arrays do not match the grid they are paired with.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Operation exists only for a subset of parameters (e.g. alpha = 0).
struct UnsupportedError : std::logic_error {
  using std::logic_error::logic_error;
};

/// A ratio whose denominator vanishes (zero function).
struct UndefinedRatioError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Quadrature error estimate exceeds what the caller can use.
struct AccuracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace lbharm
