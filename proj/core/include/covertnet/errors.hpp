#pragma once

#include <stdexcept>
#include <string>

namespace covertnet {

/// Invalid or inconsistent model parameters.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Two transmitting/receiving points closer than the separation guard.
class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Log-log regression cannot be carried out on the supplied points.
class RegressionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Result emission failed (empty input, unwritable destination).
class EmitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace covertnet
