#pragma once

#include <stdexcept>
#include <string>

namespace decoh {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied argument violates a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Shapes or subsystem dimensions do not agree, or exceed the configured cap.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver ran out of its sweep budget.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Schmidt weights are (numerically) degenerate where a nondegenerate
/// spectrum is required.
class DegenerateSpectrum : public Error {
 public:
  using Error::Error;
};

/// A computed result broke one of its invariants. `invariant()` names it.
class InvariantViolation : public Error {
 public:
  InvariantViolation(std::string invariant, const std::string& detail)
      : Error(invariant + ": " + detail), invariant_(std::move(invariant)) {}

  const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

}  // namespace decoh
