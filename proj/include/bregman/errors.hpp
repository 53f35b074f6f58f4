#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bregman {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vectors of incompatible length were combined.
class DimensionError : public Error {
 public:
  DimensionError(std::size_t expected, std::size_t actual);
};

/// A point lies outside the open domain U = int dom f.
class DomainError : public Error {
 public:
  DomainError(std::string argument, std::size_t coordinate, double value,
              double lower, double upper);
  explicit DomainError(const std::string& message)
      : Error(message) {}

  std::size_t coordinate() const noexcept { return coordinate_; }

 private:
  std::size_t coordinate_ = 0;
};

/// The Hessian does not exist at the requested point.
class NotTwiceDifferentiableError : public Error {
 public:
  using Error::Error;
};

/// A numeric inverse failed to converge within its iteration cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The conjugate of a custom function cannot be formed (no conjugate oracle).
class ConjugateUnavailableError : public Error {
 public:
  using Error::Error;
};

/// The point set violates the standing assumption of being a nonempty
/// compact subset of U.
class PointSetError : public Error {
 public:
  using Error::Error;
};

}  // namespace bregman
