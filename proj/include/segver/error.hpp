#pragma once

#include <stdexcept>
#include <string>

namespace segver {

/// Base of every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameters outside the domain of an operation (maps to CLI exit code 2).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public Error {
 public:
  using Error::Error;
};

/// A value that should have been a rational integer was not.  Carries the
/// offending reduced representation.
class NotIntegral : public Error {
 public:
  NotIntegral(const std::string& what, std::string repr)
      : Error(what + ": " + repr), repr_(std::move(repr)) {}
  const std::string& representation() const noexcept { return repr_; }

 private:
  std::string repr_;
};

class DegreeMismatch : public Error {
 public:
  using Error::Error;
};

/// Numerical identity violated by a computed value (maps to CLI exit code 1).
class MathMismatch : public Error {
 public:
  using Error::Error;
};

class CalibrationFailure : public MathMismatch {
 public:
  using MathMismatch::MathMismatch;
};

}  // namespace segver
