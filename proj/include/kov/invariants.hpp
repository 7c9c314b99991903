#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "kov/core.hpp"
#include "kov/flows.hpp"
#include "kov/maps.hpp"

namespace kov {

using InvariantFn = std::function<double(const StateVector&, double eps)>;

/// A scalar function of the state (and possibly eps) claimed to be
/// conserved by the maps and flows listed in claimed_for.
///
/// Families and what they hold:
///   kov         K_ij = (y_i - y_j)/(y_i y_j) * (prod y)^(1/(N-2)); for N = 3
///               these are K23, K31, K12 = y_1(y_2 - y_3), ...
///   P           (y_1 - y_2)(y_3 - y_4) and the two other pairings, N = 4
///   euler       E_ij = x_i^2 - x_j^2
///   euler-hk    E_mn / (1 - eps^2 x_j^2), N = 3
///   dkow        K_mn / (1 - eps^2 (y_i - y_j + y_k)^2), N = 3
///   jfg         K_mn / (1 - eps^2 y_i y_j), N = 3
///   cross-ratio K_ij / K_kl = [(y_i - y_j)/(y_i y_j)] [y_k y_l/(y_k - y_l)]
///   hk4         K_mn (1 - eps^2 (y_i + y_j - y_k - y_l)^2)^(-1/2), N = 4
///   alt4        K_mn ((1 - eps^2 y_i y_j)(1 - eps^2 y_k y_l))^(-1/2), N = 4
/// Fractional powers are evaluated on the positive orthant only.
struct Invariant {
  std::string name;
  std::size_t dim = 0;
  InvariantFn eval;
  std::vector<std::string> claimed_for;
  std::string family;

  double operator()(const StateVector& y, double eps = 0.0) const { return eval(y, eps); }
  bool claimed(const std::string& system) const;
};

/// Every family instantiated for dimension n.
std::vector<Invariant> registry(std::size_t n);

/// The members of one family (empty when the family does not exist for n).
std::vector<Invariant> family(std::size_t n, const std::string& name);

/// Invariants registered as conserved by the named map or flow.
std::vector<Invariant> claimed_by(std::size_t n, const std::string& system);

/// K_ij = (y_i - y_j)/(y_i y_j) (prod y)^(1/(N - alpha)), conserved by
/// dy_i/dt = y_i(-alpha y_i + s). Requires alpha != N.
std::vector<Invariant> kovalevskaya_integrals(std::size_t n, double alpha);

/// Zero-based indices.
double cross_ratio(const StateVector& y, std::size_t i, std::size_t j, std::size_t k, std::size_t l);

/// H_ij = (y_i - y_j)/(y_i y_j).
double h_ratio(const StateVector& y, std::size_t i, std::size_t j);

// --- densities of invariant volume forms dy / psi(y) -------------------------

using Density = std::function<double(const StateVector&, double eps)>;

/// (1 - eps^2 x_j^2)^2 for the discrete Euler top.
Density psi_euler_hk(std::size_t j);
/// (1 - eps^2 (y_i - y_j + y_k)^2)^2, j being the index with the minus sign.
Density psi_dkow(std::size_t minus_index);
/// (1 - eps^2 y_i y_j)^2.
Density psi_jfg(std::size_t i, std::size_t j);
/// H_ij^(N-1) (prod y)^2, shared by the bilinear and alternative maps.
Density psi_cross(std::size_t i, std::size_t j);
/// (prod y)^((N + 1 - 2 alpha)/(N - alpha)) for the continuous flow.
Density phi_flow(std::size_t n, double alpha = 2.0);

// --- diagnostics ---------------------------------------------------------------

enum class StopKind { none, orbit, domain };

struct DriftReport {
  std::string system;
  std::string invariant;
  double eps = 0.0;
  std::size_t steps = 0;
  double max_rel_drift = 0.0;
  /// Step at which the orbit hit a singularity, blew up, or left the
  /// invariant's domain; evaluation stopped there.
  std::optional<std::size_t> first_blowup_step;
  StopKind stop_kind = StopKind::none;
  std::string stop_reason;
  /// max_t drift_t / (u * sum_{k<=t} kappa_k), u = 2^-53 and
  /// kappa(y) = sum_i |dF/dy_i| |y_i| / max(1, |F(y_0)|): drift in units of
  /// the change that rounding the state to double can cause by step t. A
  /// conserved F stays O(10); a non-conserved one reaches 1e9 and beyond.
  double rounding_ratio = 0.0;
};

/// Iterates the map and records max_t |F(y_t) - F(y_0)| / max(1, |F(y_0)|).
/// Never throws for orbit failures; they are recorded in the report.
DriftReport drift_report(const DiscreteMap& map, const Invariant& inv, const StateVector& y0,
                         double eps, std::size_t steps);

/// Same for several invariants along one orbit.
std::vector<DriftReport> drift_reports(const DiscreteMap& map, const std::vector<Invariant>& invs,
                                       const StateVector& y0, double eps, std::size_t steps);

/// Flow version: RK4 with step dt, invariants evaluated at eps = 0.
std::vector<DriftReport> drift_reports(const FlowSpec& flow, const std::vector<Invariant>& invs,
                                       const StateVector& y0, double dt, std::size_t steps);

/// |J - psi(y')/psi(y)| / |J| with J the finite-difference Jacobian
/// determinant of the map at y.
double volume_check(const DiscreteMap& map, const Density& psi, const StateVector& y, double eps);

/// Numerical rank of the finite-difference gradients (singular values above
/// 1e-8 times the largest).
int independence_rank(const std::vector<Invariant>& invs, const StateVector& y, double eps);

inline constexpr double kExactSlope = std::numeric_limits<double>::infinity();

struct DefectStudy {
  std::vector<double> eps;
  std::vector<std::size_t> steps;
  std::vector<double> defects;
  /// Least-squares log-log slope, kExactSlope when every defect is below
  /// 1e-14, NaN when fewer than two usable points remain.
  double slope = 0.0;
};

/// Defect |F(y_n, eps) - F(y_0, eps)| after a fixed time horizon, for each
/// eps. n = round(horizon / step time); the default horizon is the time of
/// one step at the largest eps, so halving eps doubles n. horizon = 0 means
/// a single step for every eps.
DefectStudy defect_study(const DiscreteMap& map, const Invariant& candidate, const StateVector& y0,
                         const std::vector<double>& eps_list,
                         std::optional<double> horizon = std::nullopt);

double defect_order(const DiscreteMap& map, const Invariant& candidate, const StateVector& y0,
                    const std::vector<double>& eps_list,
                    std::optional<double> horizon = std::nullopt);

/// Relative residual of Phi(y')/Phi(y) = (1 + eps s')/(1 - eps s)
/// * (prod y_k / y'_k)^(1/(N-2)) under the bilinear map.
double verify_phi_functional_equation(std::size_t n, const StateVector& y, double eps,
                                      const InvariantFn& phi);

/// max over pairs {i,j} of |D_i D_j - eps^2 y_i y_j (1 + eps y_k)^2 (1 + eps y_l)^2
/// - (1 - eps^2 y_k y_l) D| / (1 + |D|), N = 4.
double verify_poly_identity_N4(const StateVector& y, double eps);

enum class RelationMap { gen_hk, alt_map };

/// Max deviation of [(y'_i - y'_j)/(y'_i y'_j)] [y_i y_j/(y_i - y_j)] over
/// pairs from its index-free value: (1 - eps s)/(1 + eps s') for the
/// bilinear map, R(y, eps) for the alternative map.
double verify_relation_qq(RelationMap map, const StateVector& y, double eps);

/// Uniform draw from [lo, hi]^n rejecting pairs closer than min_gap.
StateVector random_admissible_start(std::mt19937_64& rng, std::size_t n, double lo = 0.1,
                                    double hi = 2.0, double min_gap = 1e-3);

}  // namespace kov
