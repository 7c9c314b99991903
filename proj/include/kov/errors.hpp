#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace kov {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A point lies outside the real domain of a formula (negative radicand,
/// division by zero in an invariant, non-positive coordinate for a
/// fractional power).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A discrete map is undefined at (point, eps): a denominator or the step
/// matrix determinant vanished to working precision.
class SingularStepError : public Error {
 public:
  SingularStepError(const std::string& what, std::vector<double> point, double eps)
      : Error(what), point_(std::move(point)), eps_(eps) {}

  const std::vector<double>& point() const noexcept { return point_; }
  double eps() const noexcept { return eps_; }

 private:
  std::vector<double> point_;
  double eps_;
};

/// The reference integrator produced a non-finite or oversized state.
class BlowupError : public Error {
 public:
  BlowupError(const std::string& what, double last_valid_time)
      : Error(what), last_valid_time_(last_valid_time) {}

  double last_valid_time() const noexcept { return last_valid_time_; }

 private:
  double last_valid_time_;
};

}  // namespace kov
