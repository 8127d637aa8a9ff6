#pragma once

#include <stdexcept>
#include <string>

namespace arrival {

/// Argument outside the mathematical domain of an operation (k <= 0, eps <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid geometry or parameter combination (overlapping regions, bad grid, ...).
class ConfigurationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computed quantity failed an internal consistency check.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrixError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace arrival
