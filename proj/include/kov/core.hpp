#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "kov/errors.hpp"

namespace kov {

/// A point of phase space with N >= 3 finite real coordinates.
///
/// Immutable after construction; indices are zero-based in code and
/// one-based in names such as "K12".
class StateVector {
 public:
  explicit StateVector(std::vector<double> coords);
  StateVector(std::initializer_list<double> coords);

  std::size_t size() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  double at(std::size_t i) const;

  std::span<const double> coords() const noexcept { return coords_; }
  const std::vector<double>& values() const noexcept { return coords_; }

  auto begin() const noexcept { return coords_.begin(); }
  auto end() const noexcept { return coords_.end(); }

  friend bool operator==(const StateVector&, const StateVector&) = default;

 private:
  std::vector<double> coords_;
};

/// Continuous time advanced by one application of a discrete map at
/// parameter eps. Bilinear (Hirota-Kimura) maps double the quadratic terms
/// and therefore advance 2*eps.
enum class StepScale { eps, two_eps };

constexpr double time_per_step(StepScale scale, double eps) noexcept {
  return scale == StepScale::two_eps ? 2.0 * eps : eps;
}

const char* to_string(StepScale scale) noexcept;

/// One monomial of a quadratic vector field: coeff * y_j * y_k added to
/// component i. Order of j and k is irrelevant.
struct QuadraticTerm {
  std::size_t component;
  std::size_t j;
  std::size_t k;
  double coeff;
};

/// dy_i/dt = sum_{j<=k} a_{i,jk} y_j y_k, stored upper-triangular with the
/// full coefficient of each monomial.
class QuadraticField {
 public:
  QuadraticField(std::size_t dim, std::span<const QuadraticTerm> terms);
  QuadraticField(std::size_t dim, std::initializer_list<QuadraticTerm> terms);

  std::size_t dim() const noexcept { return dim_; }

  /// Coefficient of y_j y_k in component i (symmetric in j, k).
  double coeff(std::size_t i, std::size_t j, std::size_t k) const;

  std::vector<double> operator()(std::span<const double> y) const;

 private:
  std::size_t slot(std::size_t i, std::size_t j, std::size_t k) const;

  std::size_t dim_;
  std::size_t pairs_;
  std::vector<double> coeffs_;
};

StateVector evaluate_field(const QuadraticField& field, const StateVector& y);

/// Kovalevskaya's condition a12*a23*a31 == a13*a32*a21 for the class
/// dy_i/dt = y_i * sum_j a_ij y_j, compared with relative tolerance 1e-12.
using Matrix3 = std::array<std::array<double, 3>, 3>;
bool painleve_condition(const Matrix3& a);

/// e_k(y), the elementary symmetric polynomial of degree k; e_0 = 1.
double elementary_symmetric(std::span<const double> y, int k);
double elementary_symmetric(const StateVector& y, int k);

/// All of e_0(y), ..., e_n(y) in one pass.
std::vector<double> elementary_symmetric_all(std::span<const double> y);

}  // namespace kov
