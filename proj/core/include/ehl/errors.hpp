#pragma once

#include <stdexcept>
#include <string>

namespace ehl {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-positive dimensions, bad resolutions, broken boundary bookkeeping.
class InvalidGeometry : public Error {
 public:
  using Error::Error;
};

/// Collapsed facet or singular local mass matrix.
class SingularGeometry : public Error {
 public:
  using Error::Error;
};

/// det F <= 0 at a quadrature point. Carries the offending element.
class InvertedElement : public Error {
 public:
  InvertedElement(const std::string& what, long element)
      : Error(what), element_(element) {}
  long element() const noexcept { return element_; }

 private:
  long element_;
};

/// Argument outside the mathematical domain of a law (e.g. negative pressure).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Film thickness h <= 0: penetration beyond the regularized asperity layer.
class ModelViolation : public Error {
 public:
  using Error::Error;
};

/// Newton failed to converge within the iteration budget.
class StepFailure : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ehl
