#pragma once

#include <stdexcept>
#include <string>

namespace liso {

/// A parameter or input violates a documented precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An objective could not produce a usable value. For external objectives the
/// raw response line is kept for diagnostics.
class EvaluationError : public std::runtime_error {
 public:
  explicit EvaluationError(const std::string& what, std::string raw_response = {})
      : std::runtime_error(what), raw_response_(std::move(raw_response)) {}

  const std::string& raw_response() const noexcept { return raw_response_; }

 private:
  std::string raw_response_;
};

/// Every importance weight is zero (all log-weights are -inf).
class DegenerateWeights : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quadrature could not represent the Gibbs measure on the requested box.
class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed experiment configuration, CSV input or I/O failure.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace liso
