#pragma once

#include <functional>

#include <Eigen/Dense>

#include "kov/core.hpp"

namespace kov {

using Matrix = Eigen::MatrixXd;

/// The linear system A(y, eps) * y_next = y produced by bilinearizing a
/// quadratic field. A(y, 0) = I and A is affine in both y and eps.
struct BilinearStepSystem {
  std::size_t dim = 0;
  std::function<Matrix(std::span<const double>, double)> matrix_builder;
  StepScale scale = StepScale::two_eps;

  Matrix matrix(const StateVector& y, double eps) const;
};

/// Hirota-Kimura bilinearization: y_j y_k -> y_j y'_k + y'_j y_k and
/// y_j^2 -> 2 y_j y'_j, derivative -> (y' - y) / eps. A = I - eps * M(y).
BilinearStepSystem polarize(const QuadraticField& field);

/// y' = A(y, eps)^{-1} y by dense LU with partial pivoting. Throws
/// SingularStepError when |det A| falls below 1e-14 of its Hadamard bound.
StateVector hk_step(const BilinearStepSystem& sys, const StateVector& y, double eps);

/// Inverse step via reversibility: hk_step at -eps.
StateVector hk_inverse_step(const BilinearStepSystem& sys, const StateVector& y, double eps);

/// The step matrix of the generalized Kovalevskaya system written out
/// directly: diagonal 1 - eps(-3 y_i + s), off-diagonal -eps y_i.
Matrix build_A_generalized_kov(std::size_t n, const StateVector& y, double eps);

}  // namespace kov
