#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace latkc {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  /// Short machine-readable category, e.g. "invalid_argument".
  virtual const char* kind() const noexcept { return "error"; }
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "invalid_argument"; }
};

class IoError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "io"; }
};

/// Raised when a numerical routine detects that its input violates a
/// mathematical precondition (non-SPD Gram, negative WCE radicand, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "numerical"; }
};

/// Two rows of a point set are bitwise identical.
class DuplicatePointsError : public NumericalError {
 public:
  DuplicatePointsError(std::size_t first, std::size_t second)
      : NumericalError("duplicate points: rows " + std::to_string(first) + " and " +
                       std::to_string(second) + " coincide"),
        first_(first),
        second_(second) {}
  const char* kind() const noexcept override { return "duplicate_points"; }
  std::size_t first() const noexcept { return first_; }
  std::size_t second() const noexcept { return second_; }

 private:
  std::size_t first_;
  std::size_t second_;
};

}  // namespace latkc
