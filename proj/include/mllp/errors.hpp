#pragma once

#include <stdexcept>
#include <string>

namespace mllp {

/// Invalid argument to a numerical routine (outside the documented domain).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A convergent series could not be evaluated at the requested accuracy.
class SeriesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The term cap was reached before the truncation criterion held.
class TermCapExceeded : public SeriesError {
 public:
  using SeriesError::SeriesError;
};

/// Cancellation between terms exceeds what extended precision can resolve.
class PrecisionLoss : public SeriesError {
 public:
  using SeriesError::SeriesError;
};

/// Evaluation at a pole of the gamma function.
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

class IntegrationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptySample : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NonMonotoneCdf : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unreadable verification config. The message names the key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mllp
