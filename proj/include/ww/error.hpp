#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ww {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent arguments (weights differ, index out of range, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Enumeration or exact summation would exceed the supported size.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

/// The requested value does not exist mathematically: a pole, a non positive
/// definite matrix, a shape parameter outside the admissible set.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A factor C_lambda(z) vanished. Carries the offending partition.
class PoleError : public DomainError {
 public:
  PoleError(std::vector<int> lambda, const std::string& what)
      : DomainError(what), lambda_(std::move(lambda)) {}

  const std::vector<int>& lambda() const noexcept { return lambda_; }

 private:
  std::vector<int> lambda_;
};

}  // namespace ww
