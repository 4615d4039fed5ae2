// Exception hierarchy shared by every module.
#pragma once

#include <stdexcept>
#include <string>

namespace synflow {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Errors caused by invalid user input or configuration (CLI exit code 2).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Errors raised by numerical procedures that failed to converge (CLI exit code 3).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class NonDifferentiableField : public InputError {
 public:
  using InputError::InputError;
};

class QuadratureMismatch : public InputError {
 public:
  using InputError::InputError;
};

class GridMismatch : public InputError {
 public:
  using InputError::InputError;
};

class ExponentOutOfRange : public InputError {
 public:
  using InputError::InputError;
};

class ExponentMismatch : public InputError {
 public:
  using InputError::InputError;
};

class BasisTooLarge : public InputError {
 public:
  using InputError::InputError;
};

class DimensionMismatch : public InputError {
 public:
  using InputError::InputError;
};

class SingularGram : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class StepSizeUnderflow : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class FixedPointDivergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace synflow
