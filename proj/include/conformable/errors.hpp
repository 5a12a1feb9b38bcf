#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace conformable {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset` is the byte offset of the offending token.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, std::vector<std::string> expected);

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

/// An identifier that is neither `t` nor a registered function.
class UnknownIdentifier : public Error {
 public:
  UnknownIdentifier(std::string name, std::size_t offset);

  const std::string& name() const noexcept { return name_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::string name_;
  std::size_t offset_;
};

/// The expression is undefined at the requested point (ln of a non-positive
/// value, division by zero, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Evaluation overflowed to an infinity or produced NaN.
class NonFinite : public Error {
 public:
  using Error::Error;
};

/// No first derivative exists at the requested point.
class NonDifferentiable : public Error {
 public:
  using Error::Error;
};

/// A caller-side contract was violated (t <= a, alpha outside (0,1], ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature could not meet its tolerances within the work bound.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace conformable
