#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kov/core.hpp"

namespace kov {

using Rhs = std::function<std::vector<double>(std::span<const double>)>;

enum class SMode { sum, custom_symmetric };

/// s(y) = sum_k c_k e_k(y), k = 1..N. The default {1} is s = y_1 + ... + y_N.
struct SymmetricPolynomial {
  std::vector<double> coeffs{1.0};

  double operator()(std::span<const double> y) const;
};

/// A continuous system dy/dt = rhs(y).
struct FlowSpec {
  std::string name;
  std::size_t dim = 0;
  Rhs rhs;
  double alpha = 2.0;
  SMode s_mode = SMode::sum;
  SymmetricPolynomial s;
  /// Present when the right-hand side is a quadratic vector field.
  std::optional<QuadraticField> field;

  StateVector operator()(const StateVector& y) const;
};

/// dy_i/dt = y_i (-y_i + y_j + y_k), N = 3.
FlowSpec kovalevskaya3();

/// dy_i/dt = y_i (-alpha y_i + s), s = y_1 + ... + y_N. Requires N >= 3 and
/// alpha != N.
FlowSpec generalized_kovalevskaya(std::size_t n, double alpha = 2.0);

/// Same with a custom symmetric s given by its coefficients over e_1..e_N.
FlowSpec generalized_kovalevskaya(std::size_t n, double alpha, SymmetricPolynomial s);

/// dx_i/dt = x_j x_k, N = 3.
FlowSpec euler_top3();

/// dx_i/dt = prod_{j != i} x_j. Not quadratic for N >= 4.
FlowSpec generalized_euler(std::size_t n);

/// Look up a flow by CLI name: kovalevskaya3, gen-kov, euler3, gen-euler.
FlowSpec flow_by_name(const std::string& name, std::size_t n, double alpha = 2.0);

struct TrajectoryRow {
  std::size_t step = 0;
  double t = 0.0;
  StateVector state;
  std::vector<double> invariants;
};

struct TrajectoryRecord {
  std::vector<std::string> invariant_names;
  std::vector<TrajectoryRow> rows;

  const StateVector& final_state() const { return rows.back().state; }
};

/// One classical fourth-order Runge-Kutta step. Throws BlowupError when
/// a stage leaves the finite range.
StateVector rk4_step(const FlowSpec& flow, const StateVector& y, double dt, double t = 0.0);

/// Fixed-step RK4 from t = 0 to t_end, sampling every step. dt must divide
/// t_end up to rounding. Any |coordinate| > 1e12 or non-finite value raises
/// BlowupError carrying the last valid time.
TrajectoryRecord integrate_reference(const FlowSpec& flow, const StateVector& y0, double t_end,
                                     double dt);

/// Coordinates beyond this magnitude count as a blowup.
inline constexpr double kBlowupThreshold = 1e12;

/// Max over samples of |(dx_1/dt)^2 - prod_{j>=2}(x_1^2 + E_j1)| / (1 + |prod|)
/// along a generalized Euler trajectory, E_j1 = x_j^2 - x_1^2 taken at the
/// first sample.
double verify_hyperelliptic_relation(std::size_t n, const TrajectoryRecord& traj);

}  // namespace kov
