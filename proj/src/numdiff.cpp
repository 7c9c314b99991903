#include "kov/numdiff.hpp"

#include <cmath>

namespace kov {

namespace {

StateVector shifted(const StateVector& y, std::size_t j, double delta) {
  auto v = y.values();
  v[j] += delta;
  return StateVector(std::move(v));
}

}  // namespace

double fd_step(double v) noexcept { return 1e-6 * (1.0 + std::abs(v)); }

Matrix fd_jacobian(const VectorFn& f, const StateVector& y) {
  const auto n = static_cast<Eigen::Index>(y.size());
  Matrix jac(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto col = static_cast<std::size_t>(j);
    const double h = fd_step(y[col]);
    const auto plus = f(shifted(y, col, h));
    const auto minus = f(shifted(y, col, -h));
    if (plus.size() != y.size() || minus.size() != y.size()) {
      throw DimensionError("finite-difference Jacobian needs a map R^N -> R^N");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto row = static_cast<std::size_t>(i);
      jac(i, j) = (plus[row] - minus[row]) / (2.0 * h);
    }
  }
  return jac;
}

std::vector<double> fd_gradient(const ScalarFn& f, const StateVector& y) {
  std::vector<double> grad(y.size());
  for (std::size_t j = 0; j < y.size(); ++j) {
    const double h = fd_step(y[j]);
    grad[j] = (f(shifted(y, j, h)) - f(shifted(y, j, -h))) / (2.0 * h);
  }
  return grad;
}

}  // namespace kov
