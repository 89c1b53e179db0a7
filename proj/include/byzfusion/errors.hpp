#pragma once

#include <stdexcept>
#include <string>

namespace byzfusion {

/// Base of every error raised by the library. The CLI maps any of these to a
/// nonzero exit status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value type was constructed with arguments that break its invariants.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Inputs are well-formed but outside the domain of the requested formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Closed-form optimizer called with pi11 <= pi10.
class OrderingError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Marginals too close together for the closed-form expressions; callers
/// should fall back to the C = 0 convention.
class NearDegenerateError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Sensing model threshold pushes pf or pd onto {0, 1}.
class DegenerateModelError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Iterative search failed to reach its tolerance.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Problem size above a tractability bound.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Two descriptions of the same physical setup disagree.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace byzfusion
