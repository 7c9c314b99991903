#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "kov/core.hpp"

namespace kov {

enum class InverseRule { negate_eps, none };

using StepFn = std::function<StateVector(const StateVector&, double)>;

/// A parametrized step y -> f(y, eps) together with the continuous time it
/// advances. dim == 0 means the map accepts any N >= 3.
struct DiscreteMap {
  std::string name;
  std::size_t dim = 0;
  StepFn step;
  StepScale scale = StepScale::eps;
  InverseRule inverse_rule = InverseRule::none;

  StateVector operator()(const StateVector& y, double eps) const { return step(y, eps); }
};

// --- N = 3 closed forms -----------------------------------------------------

/// Discrete Euler top in explicit form:
///   x'_i = (x_i + 2 eps x_j x_k + eps^2 x_i (-x_i^2 + x_j^2 + x_k^2)) / den,
///   den  = 1 - eps^2 (x_1^2 + x_2^2 + x_3^2) - 2 eps^3 x_1 x_2 x_3.
StateVector euler_hk_explicit(const StateVector& x, double eps);

/// Spherical cosine law with a scaled side:
///   x'_i = (x_i + eps x_j x_k) / (sqrt(1 - eps^2 x_j^2) sqrt(1 - eps^2 x_k^2)).
/// Defined only where eps^2 x_j^2 < 1 for every j; positive roots.
StateVector cosine_law_map(const StateVector& x, double eps);

/// y'_i = y_i (1 + eps y_j)(1 + eps y_k) / ((1 + eps y_i)(1 - eps^2 y_j y_k)).
StateVector sqrt_map_jfg(const StateVector& y, double eps);

/// Pull-back of the discrete Euler top under x_i = sqrt(y_j y_k):
///   y'_i = y_i P_j P_k / (P_i D),
///   P_m  = 1 + 2 eps y_m + eps^2 (y_m y_a + y_m y_b - y_a y_b),
///   D    = 1 - eps^2 e_2(y) - 2 eps^3 e_3(y).
StateVector pullback_map_pp(const StateVector& y, double eps);

// --- generalized Kovalevskaya maps, any N >= 3 ------------------------------

/// d_i = 1 - eps(-4 y_i + s) for the bilinear map.
std::vector<double> hk_d_coefficients(const StateVector& y, double eps);

/// S(y, eps) = 1 - eps * sum_j y_j / d_j.
double hk_s_function(const StateVector& y, double eps);

/// Bilinear map of the generalized Kovalevskaya system in closed form,
/// y'_i = y_i / (S d_i). Advances 2 eps.
StateVector gen_hk_explicit(const StateVector& y, double eps);

/// Alternative map y'_i = (y_i / (1 + eps y_i)) / R_i(y, eps) with
/// R_i = 1 - eps * sum_{j != i} y_j / (1 + eps y_j). Advances eps.
StateVector alt_map(const StateVector& y, double eps);

/// R(y, eps) = 1 - eps * sum_j y_j / (1 + eps y_j).
double R_function(const StateVector& y, double eps);

/// D(y, eps) = 1 - sum_{k=2}^{N} eps^k (k - 1) e_k(y).
double D_polynomial(std::span<const double> y, double eps);
double D_polynomial(const StateVector& y, double eps);

/// D with coordinate i (zero-based) omitted.
double D_i_polynomial(const StateVector& y, double eps, std::size_t i);

/// |R(y, eps) R(y', -eps) - 1| for y' = alt_map(y, eps).
double verify_R_reciprocity(const StateVector& y, double eps);

/// (|S(y,eps)(1 + eps s') - 1|, |S(y',-eps)(1 - eps s) - 1|) for
/// y' = gen_hk_explicit(y, eps).
std::pair<double, double> verify_S_relations(const StateVector& y, double eps);

// --- registry ----------------------------------------------------------------

/// Map names: euler-hk, cosine-law, jfg, pp, dkow (generic engine on the
/// N = 3 system), gen-hk, hk-kov (generic engine on the N-dimensional
/// system), alt-map. n is ignored for the N = 3 maps.
DiscreteMap map_by_name(const std::string& name, std::size_t n = 3);

std::vector<std::string> map_names();

/// Name of the flow (see flow_by_name) a map discretizes.
std::string flow_name_for_map(const std::string& map_name);

}  // namespace kov
