#pragma once

#include <stdexcept>
#include <string>

namespace dissipative {

/// Argument outside the mathematical domain of an operation (negative
/// frequency, nu < 1/2, b >= a, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid configuration or model selection (wrong bath type for an
/// operation, malformed sweep grid, unknown preset).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A closed form was evaluated outside the regime where it is valid.
class RegimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quadrature, root finding or diagonalisation failed to converge.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Process exit codes used by the command line front end.
enum class ExitCode : int {
  kSuccess = 0,
  kConfig = 2,
  kNumerical = 3,
  kRegime = 4,
};

}  // namespace dissipative
