#pragma once

#include <functional>
#include <string>

#include "kov/core.hpp"
#include "kov/flows.hpp"
#include "kov/maps.hpp"

namespace kov {

using PointMap = std::function<StateVector(const StateVector&)>;

/// An invertible change of variables y = forward(x), x = backward(y).
struct ChangeOfVariables {
  std::string name;
  std::size_t dim = 0;
  PointMap forward;
  PointMap backward;
  std::string domain_note;
};

/// y_i = (x_j + x_k)/2, x_i = -y_i + y_j + y_k. Carries the Euler top to
/// the Kovalevskaya system and is defined everywhere.
ChangeOfVariables linear_cv();

/// y_i = x_j x_k / x_i, x_i = sqrt(y_j y_k). The backward direction takes
/// the positive root and needs y_j y_k > 0 for every pair.
ChangeOfVariables nonlinear_cv3();

/// y_i = prod_{j != i} x_j / x_i, x_i = sqrt((prod y)^(1/(N-2)) / y_i).
/// Positive orthant in both directions.
ChangeOfVariables gen_cv(std::size_t n);

/// (prod x)^(N-3): det(dy/dx) of gen_cv(n).forward up to the constant
/// factor gen_cv_jacobian_factor(n). Only the x-dependence matters for
/// transporting volume forms.
double jacobian_gen_cv(std::size_t n, const StateVector& x);

/// The exact determinant is (-2)^(N-1) (N-2) (prod x)^(N-3): with
/// y_i = prod x / x_i^2, d log y / d log x = 1 1^T - 2 I.
double gen_cv_jacobian_factor(std::size_t n);

/// max_i |forward(up(x, eps)) - down(forward(x), eps)|_i.
double conjugacy_check(const ChangeOfVariables& cv, const DiscreteMap& upstream,
                       const DiscreteMap& downstream, const StateVector& x, double eps);

/// Pushforward residual of vector fields, max_i |(J_cv F_up)(x) - F_down(cv(x))|_i
/// divided by max(1, |F_down|_inf), with J_cv from central differences.
double conjugacy_check(const ChangeOfVariables& cv, const FlowSpec& upstream,
                       const FlowSpec& downstream, const StateVector& x);

}  // namespace kov
