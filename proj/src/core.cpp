#include "kov/core.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace kov {

StateVector::StateVector(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.size() < 3) {
    throw DimensionError("state vector needs at least 3 coordinates, got " +
                         std::to_string(coords_.size()));
  }
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (!std::isfinite(coords_[i])) {
      throw DomainError("state coordinate " + std::to_string(i + 1) + " is not finite");
    }
  }
}

StateVector::StateVector(std::initializer_list<double> coords)
    : StateVector(std::vector<double>(coords)) {}

double StateVector::at(std::size_t i) const {
  if (i >= coords_.size()) {
    throw IndexError("coordinate index " + std::to_string(i) + " out of range");
  }
  return coords_[i];
}

const char* to_string(StepScale scale) noexcept {
  return scale == StepScale::two_eps ? "2eps" : "eps";
}

QuadraticField::QuadraticField(std::size_t dim, std::span<const QuadraticTerm> terms)
    : dim_(dim), pairs_(dim * (dim + 1) / 2), coeffs_(dim * pairs_, 0.0) {
  if (dim == 0) throw DimensionError("quadratic field needs a positive dimension");
  for (const auto& t : terms) {
    coeffs_[slot(t.component, t.j, t.k)] += t.coeff;
  }
}

QuadraticField::QuadraticField(std::size_t dim, std::initializer_list<QuadraticTerm> terms)
    : QuadraticField(dim, std::span<const QuadraticTerm>(terms.begin(), terms.size())) {}

std::size_t QuadraticField::slot(std::size_t i, std::size_t j, std::size_t k) const {
  if (i >= dim_ || j >= dim_ || k >= dim_) {
    throw IndexError("quadratic field index out of range");
  }
  if (j > k) std::swap(j, k);
  // Row-major enumeration of the upper triangle j <= k.
  const std::size_t pair = j * dim_ - j * (j - 1) / 2 + (k - j);
  return i * pairs_ + pair;
}

double QuadraticField::coeff(std::size_t i, std::size_t j, std::size_t k) const {
  return coeffs_[slot(i, j, k)];
}

std::vector<double> QuadraticField::operator()(std::span<const double> y) const {
  if (y.size() != dim_) {
    throw DimensionError("field of dimension " + std::to_string(dim_) +
                         " evaluated at a point of dimension " + std::to_string(y.size()));
  }
  std::vector<double> out(dim_, 0.0);
  for (std::size_t i = 0; i < dim_; ++i) {
    const double* row = coeffs_.data() + i * pairs_;
    double acc = 0.0;
    std::size_t p = 0;
    for (std::size_t j = 0; j < dim_; ++j) {
      for (std::size_t k = j; k < dim_; ++k, ++p) {
        if (row[p] != 0.0) acc += row[p] * y[j] * y[k];
      }
    }
    out[i] = acc;
  }
  return out;
}

StateVector evaluate_field(const QuadraticField& field, const StateVector& y) {
  return StateVector(field(y.coords()));
}

bool painleve_condition(const Matrix3& a) {
  const double lhs = a[0][1] * a[1][2] * a[2][0];
  const double rhs = a[0][2] * a[2][1] * a[1][0];
  constexpr double rtol = 1e-12;
  return std::abs(lhs - rhs) <= rtol * (std::abs(lhs) + std::abs(rhs));
}

std::vector<double> elementary_symmetric_all(std::span<const double> y) {
  // e[k] accumulates the coefficient of t^k in prod (1 + t*y_j).
  std::vector<double> e(y.size() + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t j = 0; j < y.size(); ++j) {
    for (std::size_t k = j + 1; k >= 1; --k) {
      e[k] += y[j] * e[k - 1];
    }
  }
  return e;
}

double elementary_symmetric(std::span<const double> y, int k) {
  if (k < 0 || static_cast<std::size_t>(k) > y.size()) {
    throw IndexError("elementary symmetric degree " + std::to_string(k) +
                     " out of range [0, " + std::to_string(y.size()) + "]");
  }
  return elementary_symmetric_all(y)[static_cast<std::size_t>(k)];
}

double elementary_symmetric(const StateVector& y, int k) {
  return elementary_symmetric(y.coords(), k);
}

}  // namespace kov
