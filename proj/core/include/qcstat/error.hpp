#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qcstat {

// Base of every error raised by the library. The CLI maps the concrete
// subclasses onto exit codes, so new error kinds must derive from one of
// the two families below.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: the caller violated a documented precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// The inputs were fine but a numerical procedure could not deliver the
// requested accuracy.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Point outside the closure of a potential's domain.
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Tabulated potential evaluated outside its sample range.
class RangeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Operation called outside the state it is defined for (e.g. the Hessian
// formula away from the stationary point).
class ContractError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Malformed external input (CSV, config files).
class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ResourceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class AccuracyError : public NumericalError {
 public:
  AccuracyError(const std::string& what, std::size_t level)
      : NumericalError(what), level_(level) {}

  std::size_t level() const noexcept { return level_; }

 private:
  std::size_t level_;
};

// Fitted eigenvalue growth is not increasing.
class ModelError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class TruncationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IntegrabilityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double gradient_norm)
      : NumericalError(what), gradient_norm_(gradient_norm) {}

  double gradient_norm() const noexcept { return gradient_norm_; }

 private:
  double gradient_norm_;
};

}  // namespace qcstat
