#pragma once

#include <functional>
#include <vector>

#include "kov/core.hpp"
#include "kov/hk_engine.hpp"

namespace kov {

using VectorFn = std::function<StateVector(const StateVector&)>;
using ScalarFn = std::function<double(const StateVector&)>;

/// Central-difference step for coordinate value v: 1e-6 * (1 + |v|).
double fd_step(double v) noexcept;

/// d f_i / d y_j by central differences.
Matrix fd_jacobian(const VectorFn& f, const StateVector& y);

std::vector<double> fd_gradient(const ScalarFn& f, const StateVector& y);

}  // namespace kov
