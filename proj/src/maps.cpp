#include "kov/maps.hpp"

#include <cmath>
#include <string>

#include "kov/flows.hpp"
#include "kov/hk_engine.hpp"

namespace kov {

namespace {

constexpr double kSingularRtol = 1e-14;

void require_nonzero(double value, double scale, const std::string& what, const StateVector& y,
                     double eps) {
  if (!(std::abs(value) > kSingularRtol * scale)) {
    throw SingularStepError(what + " vanishes", y.values(), eps);
  }
}

void require_dim3(const StateVector& y, const char* map) {
  if (y.size() != 3) throw DimensionError(std::string(map) + " is defined for N = 3 only");
}

StateVector finite_state(std::vector<double> v, const StateVector& y, double eps) {
  for (double c : v) {
    if (!std::isfinite(c)) throw SingularStepError("step produced a non-finite state", y.values(), eps);
  }
  return StateVector(std::move(v));
}

}  // namespace

StateVector euler_hk_explicit(const StateVector& x, double eps) {
  require_dim3(x, "euler_hk_explicit");
  const double e2 = eps * eps;
  const double sq = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
  const double triple = x[0] * x[1] * x[2];
  const double den = 1.0 - e2 * sq - 2.0 * e2 * eps * triple;
  require_nonzero(den, 1.0 + e2 * sq + 2.0 * std::abs(e2 * eps * triple), "Euler top denominator", x,
                  eps);
  std::vector<double> out(3);
  for (std::size_t i = 0; i < 3; ++i) {
    const double xi = x[i], xj = x[(i + 1) % 3], xk = x[(i + 2) % 3];
    out[i] = (xi + 2.0 * eps * xj * xk + e2 * xi * (-xi * xi + xj * xj + xk * xk)) / den;
  }
  return finite_state(std::move(out), x, eps);
}

StateVector cosine_law_map(const StateVector& x, double eps) {
  require_dim3(x, "cosine_law_map");
  std::array<double, 3> root{};
  for (std::size_t j = 0; j < 3; ++j) {
    const double r = 1.0 - eps * eps * x[j] * x[j];
    if (!(r > 0.0)) {
      throw DomainError("cosine-law map needs eps^2 x_" + std::to_string(j + 1) + "^2 < 1");
    }
    root[j] = std::sqrt(r);
  }
  std::vector<double> out(3);
  for (std::size_t i = 0; i < 3; ++i) {
    const std::size_t j = (i + 1) % 3, k = (i + 2) % 3;
    out[i] = (x[i] + eps * x[j] * x[k]) / (root[j] * root[k]);
  }
  return finite_state(std::move(out), x, eps);
}

StateVector sqrt_map_jfg(const StateVector& y, double eps) {
  require_dim3(y, "sqrt_map_jfg");
  std::vector<double> out(3);
  for (std::size_t i = 0; i < 3; ++i) {
    const std::size_t j = (i + 1) % 3, k = (i + 2) % 3;
    const double ui = 1.0 + eps * y[i];
    const double q = 1.0 - eps * eps * y[j] * y[k];
    require_nonzero(ui, 1.0 + std::abs(eps * y[i]), "1 + eps y_" + std::to_string(i + 1), y, eps);
    require_nonzero(q, 1.0 + std::abs(eps * eps * y[j] * y[k]), "1 - eps^2 y_j y_k", y, eps);
    out[i] = y[i] * (1.0 + eps * y[j]) * (1.0 + eps * y[k]) / (ui * q);
  }
  return finite_state(std::move(out), y, eps);
}

StateVector pullback_map_pp(const StateVector& y, double eps) {
  require_dim3(y, "pullback_map_pp");
  const double e2 = eps * eps;
  // Same rational function as the expanded form, with each factor
  // regrouped around u_m = 1 + eps y_m:
  //   P_m = u_m^2 - eps^2 (y_m - y_a)(y_m - y_b),
  //   D   = u_1 u_2 + u_2 u_3 + u_3 u_1 - 2 u_1 u_2 u_3.
  // The expanded polynomials cancel catastrophically near y_m = -1/eps.
  const std::array<double, 3> u{1.0 + eps * y[0], 1.0 + eps * y[1], 1.0 + eps * y[2]};
  std::array<double, 3> p{};
  for (std::size_t m = 0; m < 3; ++m) {
    const std::size_t a = (m + 1) % 3, b = (m + 2) % 3;
    p[m] = u[m] * u[m] - e2 * (y[m] - y[a]) * (y[m] - y[b]);
    require_nonzero(p[m], 1.0 + u[m] * u[m] + e2 * std::abs((y[m] - y[a]) * (y[m] - y[b])),
                    "pull-back factor P_" + std::to_string(m + 1), y, eps);
  }
  const double d = u[0] * u[1] + u[1] * u[2] + u[2] * u[0] - 2.0 * u[0] * u[1] * u[2];
  require_nonzero(d,
                  std::abs(u[0] * u[1]) + std::abs(u[1] * u[2]) + std::abs(u[2] * u[0]) +
                      2.0 * std::abs(u[0] * u[1] * u[2]),
                  "pull-back denominator", y, eps);
  std::vector<double> out(3);
  for (std::size_t i = 0; i < 3; ++i) {
    out[i] = y[i] * p[(i + 1) % 3] * p[(i + 2) % 3] / (p[i] * d);
  }
  return finite_state(std::move(out), y, eps);
}

std::vector<double> hk_d_coefficients(const StateVector& y, double eps) {
  double s = 0.0;
  for (double v : y) s += v;
  std::vector<double> d(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) d[i] = 1.0 - eps * (-4.0 * y[i] + s);
  return d;
}

double hk_s_function(const StateVector& y, double eps) {
  const auto d = hk_d_coefficients(y, eps);
  double acc = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) acc += y[j] / d[j];
  return 1.0 - eps * acc;
}

StateVector gen_hk_explicit(const StateVector& y, double eps) {
  const auto d = hk_d_coefficients(y, eps);
  double abs_sum = 0.0;
  for (double v : y) abs_sum += std::abs(v);
  double acc = 0.0, acc_abs = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) {
    require_nonzero(d[j], 1.0 + std::abs(eps) * (4.0 * std::abs(y[j]) + abs_sum),
                    "d_" + std::to_string(j + 1), y, eps);
    acc += y[j] / d[j];
    acc_abs += std::abs(y[j] / d[j]);
  }
  const double s_fn = 1.0 - eps * acc;
  require_nonzero(s_fn, 1.0 + std::abs(eps) * acc_abs, "S(y, eps)", y, eps);
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] / (s_fn * d[i]);
  return finite_state(std::move(out), y, eps);
}

StateVector alt_map(const StateVector& y, double eps) {
  const std::size_t n = y.size();
  std::vector<double> a(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double u = 1.0 + eps * y[j];
    require_nonzero(u, 1.0 + std::abs(eps * y[j]), "1 + eps y_" + std::to_string(j + 1), y, eps);
    a[j] = y[j] / u;
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0, acc_abs = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      acc += a[j];
      acc_abs += std::abs(a[j]);
    }
    const double r_i = 1.0 - eps * acc;
    require_nonzero(r_i, 1.0 + std::abs(eps) * acc_abs, "R_" + std::to_string(i + 1), y, eps);
    out[i] = a[i] / r_i;
  }
  return finite_state(std::move(out), y, eps);
}

double R_function(const StateVector& y, double eps) {
  double acc = 0.0;
  for (double v : y) {
    const double u = 1.0 + eps * v;
    if (u == 0.0) throw DomainError("R(y, eps) needs 1 + eps y_j != 0");
    acc += v / u;
  }
  return 1.0 - eps * acc;
}

double D_polynomial(std::span<const double> y, double eps) {
  const auto e = elementary_symmetric_all(y);
  double acc = 1.0;
  double power = eps;
  for (std::size_t k = 2; k < e.size(); ++k) {
    power *= eps;
    acc -= power * static_cast<double>(k - 1) * e[k];
  }
  return acc;
}

double D_polynomial(const StateVector& y, double eps) { return D_polynomial(y.coords(), eps); }

double D_i_polynomial(const StateVector& y, double eps, std::size_t i) {
  if (i >= y.size()) throw IndexError("D_i index out of range");
  std::vector<double> rest;
  rest.reserve(y.size() - 1);
  for (std::size_t j = 0; j < y.size(); ++j) {
    if (j != i) rest.push_back(y[j]);
  }
  return D_polynomial(rest, eps);
}

double verify_R_reciprocity(const StateVector& y, double eps) {
  const auto next = alt_map(y, eps);
  return std::abs(R_function(y, eps) * R_function(next, -eps) - 1.0);
}

std::pair<double, double> verify_S_relations(const StateVector& y, double eps) {
  const auto next = gen_hk_explicit(y, eps);
  double s = 0.0, s_next = 0.0;
  for (double v : y) s += v;
  for (double v : next) s_next += v;
  return {std::abs(hk_s_function(y, eps) * (1.0 + eps * s_next) - 1.0),
          std::abs(hk_s_function(next, -eps) * (1.0 - eps * s) - 1.0)};
}

DiscreteMap map_by_name(const std::string& name, std::size_t n) {
  constexpr auto one = StepScale::eps;
  constexpr auto two = StepScale::two_eps;
  constexpr auto reversible = InverseRule::negate_eps;
  if (name == "euler-hk") return {name, 3, euler_hk_explicit, two, reversible};
  if (name == "cosine-law") return {name, 3, cosine_law_map, one, InverseRule::none};
  if (name == "jfg") return {name, 3, sqrt_map_jfg, one, reversible};
  if (name == "pp") return {name, 3, pullback_map_pp, two, reversible};
  if (name == "dkow") {
    auto sys = polarize(*kovalevskaya3().field);
    return {name, 3, [sys](const StateVector& y, double e) { return hk_step(sys, y, e); }, two,
            reversible};
  }
  if (n < 3) throw DimensionError("map " + name + " needs N >= 3");
  if (name == "gen-hk") return {name, n, gen_hk_explicit, two, reversible};
  if (name == "hk-kov") {
    auto sys = polarize(*generalized_kovalevskaya(n, 2.0).field);
    return {name, n, [sys](const StateVector& y, double e) { return hk_step(sys, y, e); }, two,
            reversible};
  }
  if (name == "alt-map") return {name, n, alt_map, one, reversible};
  throw ParameterError("unknown map '" + name + "'");
}

std::vector<std::string> map_names() {
  return {"euler-hk", "cosine-law", "jfg", "pp", "dkow", "gen-hk", "hk-kov", "alt-map"};
}

std::string flow_name_for_map(const std::string& map_name) {
  if (map_name == "euler-hk" || map_name == "cosine-law") return "euler3";
  if (map_name == "jfg" || map_name == "pp" || map_name == "dkow") return "kovalevskaya3";
  if (map_name == "gen-hk" || map_name == "hk-kov" || map_name == "alt-map") return "gen-kov";
  throw ParameterError("unknown map '" + map_name + "'");
}

}  // namespace kov
