#pragma once

#include <stdexcept>
#include <string>

namespace fastlight {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter violates a documented precondition or value range.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The Lorentzian (far-detuned) approximation was requested outside its domain.
class ApproximationDomainError : public InvalidArgument {
 public:
  ApproximationDomainError(const std::string& what, double ratio)
      : InvalidArgument(what), ratio_(ratio) {}
  /// |Delta| / Gamma of the offending medium.
  double ratio() const noexcept { return ratio_; }

 private:
  double ratio_;
};

/// Post-selection onto the dark port, where the weak value diverges.
class SingularPostSelection : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// No physical line-center transmission (<= 1) realises the requested
/// total transmission at this analyzer angle.
class InfeasibleTransmission : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Time or detuning grid too small / too coarse for the requested operation.
class GridError : public Error {
 public:
  using Error::Error;
};

/// Numerical breakdown: degenerate parameters, derivative step underflow,
/// optimizer or root-finder non-convergence.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace fastlight
