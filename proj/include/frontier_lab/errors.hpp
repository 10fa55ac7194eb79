#pragma once

#include <stdexcept>
#include <string>

namespace frontier_lab {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Zipf normalization diverges (alpha <= 1 on unbounded support).
class DivergentNormalizationError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Invalid configuration detected at construction time.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Mellin integral does not converge for the requested exponent.
class IntegrabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientHorizonError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IntegratorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite parameters during network training.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace frontier_lab
