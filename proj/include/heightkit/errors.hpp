#pragma once

#include <stdexcept>
#include <string>

namespace heightkit {

/// Malformed input or a violated precondition. The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An enumeration would exceed its configured vector/point cap (CLI exit code 3).
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation requested exactly at a pole of a meromorphic function.
class PoleError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class SingularMatrixError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A section vanishes at the point where its norm is requested.
class ZeroSectionError : public ValidationError {
 public:
  ZeroSectionError(const std::string& place, const std::string& what)
      : ValidationError(what), place_(place) {}
  const std::string& place() const noexcept { return place_; }

 private:
  std::string place_;
};

class DegenerateDesignError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved_tolerance() const noexcept { return achieved_; }

 private:
  double achieved_;
};

}  // namespace heightkit
