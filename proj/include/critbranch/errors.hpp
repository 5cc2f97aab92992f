#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace critbranch {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside the domain of the requested object or formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A rate sequence failed its sign or normalisation checks.
class ValidityError : public Error {
 public:
  ValidityError(const std::string& what, std::size_t index)
      : Error(what + " (first offending index " + std::to_string(index) + ")"), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// The adaptive integrator could not proceed without shrinking below its step floor.
class StepUnderflowError : public Error {
 public:
  explicit StepUnderflowError(double t_reached)
      : Error("step size underflow at t = " + std::to_string(t_reached)), t_reached_(t_reached) {}
  double t_reached() const noexcept { return t_reached_; }

 private:
  double t_reached_;
};

class NonConvergenceError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// The check is not meaningful for the given input (e.g. a zero remainder).
class InapplicableError : public Error {
 public:
  using Error::Error;
};

/// Preconditions of the transient-regime limit theorems are not met.
class EligibilityError : public Error {
 public:
  using Error::Error;
};

class InfiniteMomentError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

class InsufficientEventsError : public Error {
 public:
  using Error::Error;
};

/// Configuration does not match the expected schema; `path()` is a JSON pointer.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& path, const std::string& what)
      : Error("schema error at '" + path + "': " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace critbranch
