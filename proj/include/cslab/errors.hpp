#pragma once

#include <stdexcept>
#include <string>

namespace cslab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside its mathematical domain (|p| >= 1, |z| > 1, s < 0, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// The finite-gap constraint a conj(c) + |c|^2/(1-|p|^2) = 2 is violated.
class ConstraintViolation : public Error {
public:
  ConstraintViolation(const std::string &what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

/// An operation was called outside of its precondition (wrong resonance class,
/// mismatched truncations, time outside the admissible window).
class PreconditionError : public Error {
public:
  using Error::Error;
};

/// The direct time stepper produced non-finite values or lost mass conservation.
class BlowupSuspected : public Error {
public:
  BlowupSuspected(const std::string &what, double time)
      : Error(what), time_(time) {}
  double time() const noexcept { return time_; }

private:
  double time_;
};

/// A resolvent solve is too ill-conditioned to be trusted in double precision.
class IllConditioned : public Error {
public:
  IllConditioned(const std::string &what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

private:
  double condition_;
};

/// A numerical kernel (eigen-solver) failed.
class NumericalFailure : public Error {
public:
  using Error::Error;
};

} // namespace cslab
