#pragma once

#include <stdexcept>
#include <string>

namespace ltlab {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A caller-side contract violation (wrong family, inadmissible exponents, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Malformed textual input (weight specs, CSV rows).
class ParseError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Base for failures of a numerical procedure on valid input.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class OverflowError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The spectral parameter sits on the branch cut of kappa = sqrt(-lambda).
class OutOfSheetError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ContourError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class WindowEmptyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace ltlab
