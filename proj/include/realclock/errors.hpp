#pragma once

#include <stdexcept>
#include <string>

namespace realclock {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input violates a documented precondition or type invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a formula (e.g. T >= T_max).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Operation is not defined for the given clock kind.
class UnsupportedKind : public Error {
 public:
  using Error::Error;
};

/// Time stepping produced a state that is no longer a density matrix.
class IntegrationError : public Error {
 public:
  using Error::Error;
};

/// The quadrature grid does not resolve or cover the integrand.
class InsufficientGrid : public Error {
 public:
  using Error::Error;
};

/// Grid enlargement did not converge.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// The clock expectation value is not monotone over the grid.
class ClockFoldingError : public Error {
 public:
  using Error::Error;
};

/// Request exceeds the supported problem size.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// A state with zero trace (or zero coherence) was used where a ratio is needed.
class DegenerateState : public Error {
 public:
  using Error::Error;
};

}  // namespace realclock
