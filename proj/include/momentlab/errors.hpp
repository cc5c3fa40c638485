#pragma once

#include <stdexcept>
#include <string>

namespace momentlab {

/// Base of all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition violated: bad degree, index out of range, wrong sizes.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Operands live over different rings (e.g. two distinct primes).
class RingMismatch : public Error {
 public:
  using Error::Error;
};

/// Exactness required but a float ring was supplied.
class InexactRing : public Error {
 public:
  using Error::Error;
};

/// Rank engines could not be reconciled.
class ConsensusError : public Error {
 public:
  using Error::Error;
};

/// A run would exceed the configured memory budget.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

/// Iterative refinement kept increasing the residual.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace momentlab
