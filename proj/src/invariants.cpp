#include "kov/invariants.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>

#include <Eigen/SVD>

#include "kov/numdiff.hpp"

namespace kov {

namespace {

std::string idx(std::size_t i) { return std::to_string(i + 1); }

double product(const StateVector& y) {
  double p = 1.0;
  for (double v : y) p *= v;
  return p;
}

void require_dim(const StateVector& y, std::size_t n, const std::string& what) {
  if (y.size() != n) {
    throw DimensionError(what + " expects N = " + std::to_string(n) + ", got " +
                         std::to_string(y.size()));
  }
}

void require_positive(const StateVector& y, const std::string& what) {
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(y[i] > 0.0)) {
      throw DomainError(what + " is real only on the positive orthant (y_" + idx(i) + " = " +
                        std::to_string(y[i]) + ")");
    }
  }
}

bool is_integer(double x) { return std::isfinite(x) && x == std::round(x); }

/// p^e, real for integer e at any sign and for p > 0 otherwise.
double real_power(double p, double e, const StateVector& y, const std::string& what) {
  if (!is_integer(e)) require_positive(y, what);
  return std::pow(p, e);
}

double nonzero_factor(double value, const std::string& what) {
  if (value == 0.0 || !std::isfinite(value)) throw DomainError(what + " vanishes");
  return value;
}

double positive_radicand(double value, const std::string& what) {
  if (!(value > 0.0)) throw DomainError(what + " is not positive");
  return value;
}

/// K_ij for the system with parameter alpha. When the exponent 1/(N - alpha)
/// is 1 the expression is the polynomial (y_i - y_j) prod_{k != i,j} y_k.
double kov_integral(const StateVector& y, std::size_t i, std::size_t j, double alpha) {
  const double e = 1.0 / (static_cast<double>(y.size()) - alpha);
  if (e == 1.0) {
    double p = y[i] - y[j];
    for (std::size_t k = 0; k < y.size(); ++k) {
      if (k != i && k != j) p *= y[k];
    }
    return p;
  }
  return h_ratio(y, i, j) * real_power(product(y), e, y, "K_" + idx(i) + idx(j));
}

std::vector<std::pair<std::size_t, std::size_t>> pairs(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) out.emplace_back(i, j);
  }
  return out;
}

// The N = 3 integrals listed in cyclic order (2,3), (3,1), (1,2).
constexpr std::array<std::pair<std::size_t, std::size_t>, 3> kCyclic{{{1, 2}, {2, 0}, {0, 1}}};

// The three ways of splitting {1,2,3,4} into two pairs.
constexpr std::array<std::array<std::size_t, 4>, 3> kPartitions{
    {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}}};

std::vector<Invariant> kov_family(std::size_t n) {
  std::vector<std::string> claims{"gen-kov"};
  if (n == 3) claims.push_back("kovalevskaya3");
  std::vector<Invariant> out;
  if (n == 3) {
    for (auto [i, j] : kCyclic) {
      out.push_back({"K" + idx(i) + idx(j), 3,
                     [i, j](const StateVector& y, double) {
                       require_dim(y, 3, "K");
                       return kov_integral(y, i, j, 2.0);
                     },
                     claims, "kov"});
    }
    return out;
  }
  for (auto& inv : kovalevskaya_integrals(n, 2.0)) {
    inv.claimed_for = claims;
    out.push_back(std::move(inv));
  }
  return out;
}

std::vector<Invariant> p_family() {
  std::vector<Invariant> out;
  for (std::size_t m = 0; m < 3; ++m) {
    const auto part = kPartitions[m];
    out.push_back({"P" + idx(m), 4,
                   [part](const StateVector& y, double) {
                     require_dim(y, 4, "P");
                     return (y[part[0]] - y[part[1]]) * (y[part[2]] - y[part[3]]);
                   },
                   {"gen-kov"}, "P"});
  }
  return out;
}

std::vector<Invariant> euler_family(std::size_t n) {
  std::vector<std::string> claims{"gen-euler"};
  if (n == 3) claims.push_back("euler3");
  std::vector<Invariant> out;
  for (auto [i, j] : pairs(n)) {
    out.push_back({"E" + idx(i) + idx(j), n,
                   [n, i, j](const StateVector& y, double) {
                     require_dim(y, n, "E");
                     return y[i] * y[i] - y[j] * y[j];
                   },
                   claims, "euler"});
  }
  return out;
}

std::vector<Invariant> euler_hk_family() {
  std::vector<Invariant> out;
  for (auto [m, n] : kCyclic) {
    for (std::size_t j = 0; j < 3; ++j) {
      out.push_back({"E" + idx(m) + idx(n) + "[" + idx(j) + "]", 3,
                     [m, n, j](const StateVector& x, double eps) {
                       require_dim(x, 3, "E(eps)");
                       const double den =
                           nonzero_factor(1.0 - eps * eps * x[j] * x[j], "1 - eps^2 x_j^2");
                       return (x[m] * x[m] - x[n] * x[n]) / den;
                     },
                     {"euler-hk", "cosine-law"}, "euler-hk"});
    }
  }
  return out;
}

std::vector<Invariant> dkow_family() {
  std::vector<Invariant> out;
  for (auto [m, n] : kCyclic) {
    for (std::size_t j = 0; j < 3; ++j) {
      out.push_back({"K" + idx(m) + idx(n) + "[-" + idx(j) + "]", 3,
                     [m, n, j](const StateVector& y, double eps) {
                       require_dim(y, 3, "K(eps)");
                       const double w = y[0] + y[1] + y[2] - 2.0 * y[j];
                       const double den =
                           nonzero_factor(1.0 - eps * eps * w * w, "1 - eps^2 (y_i - y_j + y_k)^2");
                       return kov_integral(y, m, n, 2.0) / den;
                     },
                     {"dkow", "gen-hk", "hk-kov"}, "dkow"});
    }
  }
  return out;
}

std::vector<Invariant> jfg_family() {
  std::vector<Invariant> out;
  for (auto [m, n] : kCyclic) {
    for (auto [i, j] : kCyclic) {
      out.push_back({"K" + idx(m) + idx(n) + "[" + idx(std::min(i, j)) + idx(std::max(i, j)) + "]",
                     3,
                     [m, n, i, j](const StateVector& y, double eps) {
                       require_dim(y, 3, "K(eps)");
                       const double den =
                           nonzero_factor(1.0 - eps * eps * y[i] * y[j], "1 - eps^2 y_i y_j");
                       return kov_integral(y, m, n, 2.0) / den;
                     },
                     {"jfg", "pp", "alt-map"}, "jfg"});
    }
  }
  return out;
}

std::vector<Invariant> cross_family(std::size_t n) {
  std::vector<std::string> claims{"gen-hk", "hk-kov", "alt-map", "gen-kov"};
  if (n == 3) {
    for (const char* s : {"dkow", "jfg", "pp", "kovalevskaya3"}) claims.emplace_back(s);
  }
  const std::size_t k = n - 2, l = n - 1;
  std::vector<Invariant> out;
  for (auto [i, j] : pairs(n)) {
    if (i == k && j == l) continue;
    out.push_back({"K" + idx(i) + idx(j) + "/K" + idx(k) + idx(l), n,
                   [n, i, j, k, l](const StateVector& y, double) {
                     require_dim(y, n, "cross-ratio");
                     return cross_ratio(y, i, j, k, l);
                   },
                   claims, "cross-ratio"});
  }
  return out;
}

template <class Phi>
std::vector<Invariant> n4_family(const std::string& family_name, std::vector<std::string> claims,
                                 Phi phi) {
  std::vector<Invariant> out;
  for (const auto& part : kPartitions) {
    const std::string tag =
        "[" + idx(part[0]) + idx(part[1]) + "|" + idx(part[2]) + idx(part[3]) + "]";
    for (auto [m, n] : pairs(4)) {
      out.push_back({"K" + idx(m) + idx(n) + tag, 4,
                     [m, n, part, phi, family_name](const StateVector& y, double eps) {
                       require_dim(y, 4, family_name);
                       return kov_integral(y, m, n, 2.0) * phi(y, eps, part);
                     },
                     claims, family_name});
    }
  }
  return out;
}

}  // namespace

bool Invariant::claimed(const std::string& system) const {
  return std::find(claimed_for.begin(), claimed_for.end(), system) != claimed_for.end();
}

double h_ratio(const StateVector& y, std::size_t i, std::size_t j) {
  if (i >= y.size() || j >= y.size()) throw IndexError("H_ij index out of range");
  if (y[i] == 0.0 || y[j] == 0.0) throw DomainError("H_" + idx(i) + idx(j) + " needs y_i y_j != 0");
  return (y[i] - y[j]) / (y[i] * y[j]);
}

double cross_ratio(const StateVector& y, std::size_t i, std::size_t j, std::size_t k,
                   std::size_t l) {
  const double den = h_ratio(y, k, l);
  if (den == 0.0) throw DomainError("cross-ratio needs y_k != y_l");
  return h_ratio(y, i, j) / den;
}

std::vector<Invariant> kovalevskaya_integrals(std::size_t n, double alpha) {
  if (n < 3) throw DimensionError("integrals need N >= 3");
  if (alpha == static_cast<double>(n)) throw ParameterError("alpha must differ from N");
  std::vector<Invariant> out;
  for (auto [i, j] : pairs(n)) {
    out.push_back({"K" + idx(i) + idx(j), n,
                   [n, i, j, alpha](const StateVector& y, double) {
                     require_dim(y, n, "K");
                     return kov_integral(y, i, j, alpha);
                   },
                   {"gen-kov"}, "kov"});
  }
  return out;
}

std::vector<Invariant> registry(std::size_t n) {
  if (n < 3) throw DimensionError("registry needs N >= 3");
  std::vector<Invariant> out;
  auto append = [&out](std::vector<Invariant> part) {
    for (auto& inv : part) out.push_back(std::move(inv));
  };
  append(kov_family(n));
  append(euler_family(n));
  append(cross_family(n));
  if (n == 3) {
    append(euler_hk_family());
    append(dkow_family());
    append(jfg_family());
  }
  if (n == 4) {
    append(p_family());
    append(n4_family("hk4", {"gen-hk", "hk-kov"},
                     [](const StateVector& y, double eps, const std::array<std::size_t, 4>& p) {
                       const double w = y[p[0]] + y[p[1]] - y[p[2]] - y[p[3]];
                       return 1.0 / std::sqrt(positive_radicand(
                                        1.0 - eps * eps * w * w,
                                        "1 - eps^2 (y_i + y_j - y_k - y_l)^2"));
                     }));
    append(n4_family("alt4", {"alt-map"},
                     [](const StateVector& y, double eps, const std::array<std::size_t, 4>& p) {
                       // Each factor must stay positive: the branch continued from
                       // eps = 0 changes sign when both factors do.
                       const double a = positive_radicand(1.0 - eps * eps * y[p[0]] * y[p[1]],
                                                          "1 - eps^2 y_i y_j");
                       const double b = positive_radicand(1.0 - eps * eps * y[p[2]] * y[p[3]],
                                                          "1 - eps^2 y_k y_l");
                       return 1.0 / std::sqrt(a * b);
                     }));
  }
  return out;
}

std::vector<Invariant> family(std::size_t n, const std::string& name) {
  std::vector<Invariant> out;
  for (auto& inv : registry(n)) {
    if (inv.family == name) out.push_back(std::move(inv));
  }
  return out;
}

std::vector<Invariant> claimed_by(std::size_t n, const std::string& system) {
  std::vector<Invariant> out;
  for (auto& inv : registry(n)) {
    if (inv.claimed(system)) out.push_back(std::move(inv));
  }
  return out;
}

// --- densities ---------------------------------------------------------------

Density psi_euler_hk(std::size_t j) {
  return [j](const StateVector& x, double eps) {
    const double f = 1.0 - eps * eps * x[j] * x[j];
    return f * f;
  };
}

Density psi_dkow(std::size_t minus_index) {
  return [minus_index](const StateVector& y, double eps) {
    const double w = y[0] + y[1] + y[2] - 2.0 * y[minus_index];
    const double f = 1.0 - eps * eps * w * w;
    return f * f;
  };
}

Density psi_jfg(std::size_t i, std::size_t j) {
  return [i, j](const StateVector& y, double eps) {
    const double f = 1.0 - eps * eps * y[i] * y[j];
    return f * f;
  };
}

Density psi_cross(std::size_t i, std::size_t j) {
  return [i, j](const StateVector& y, double) {
    const double p = product(y);
    return std::pow(h_ratio(y, i, j), static_cast<double>(y.size() - 1)) * p * p;
  };
}

Density phi_flow(std::size_t n, double alpha) {
  const double nn = static_cast<double>(n);
  if (alpha == nn) throw ParameterError("alpha must differ from N");
  const double e = (nn + 1.0 - 2.0 * alpha) / (nn - alpha);
  return [n, e](const StateVector& y, double) {
    require_dim(y, n, "phi");
    return real_power(product(y), e, y, "phi");
  };
}

// --- drift -------------------------------------------------------------------

namespace {

struct Tracker {
  const Invariant* inv;
  DriftReport report;
  double f0 = 0.0;
  double scale = 1.0;
  double kappa_sum = 0.0;
  bool active = true;

  void stop(std::size_t step, StopKind kind, std::string reason) {
    if (!active) return;
    active = false;
    report.first_blowup_step = step;
    report.stop_kind = kind;
    report.stop_reason = std::move(reason);
  }

  // A gradient stencil that leaves the domain adds nothing, which only
  // tightens the bound.
  void add_kappa(const StateVector& y, double eps) {
    try {
      const auto g = fd_gradient([&](const StateVector& p) { return (*inv)(p, eps); }, y);
      double kappa = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) kappa += std::abs(g[i] * y[i]);
      if (std::isfinite(kappa)) kappa_sum += kappa / scale;
    } catch (const DomainError&) {
    }
  }

  void observe(const StateVector& y, double eps, std::size_t step) {
    if (!active) return;
    try {
      const double f = (*inv)(y, eps);
      if (!std::isfinite(f)) {
        stop(step, StopKind::domain, "invariant not finite");
        return;
      }
      const double drift = std::abs(f - f0) / scale;
      report.max_rel_drift = std::max(report.max_rel_drift, drift);
      add_kappa(y, eps);
      if (drift > 0.0) {
        const double bound = 0x1p-53 * kappa_sum;
        report.rounding_ratio =
            std::max(report.rounding_ratio,
                     bound > 0.0 ? drift / bound : std::numeric_limits<double>::infinity());
      }
    } catch (const DomainError& e) {
      stop(step, StopKind::domain, e.what());
    }
  }
};

std::vector<Tracker> start_trackers(const std::string& system, const std::vector<Invariant>& invs,
                                    const StateVector& y0, double eps, double eval_eps,
                                    std::size_t steps) {
  if (steps == 0) throw ParameterError("drift needs steps >= 1");
  std::vector<Tracker> trackers;
  trackers.reserve(invs.size());
  for (const auto& inv : invs) {
    if (inv.dim != y0.size()) {
      throw DimensionError("invariant " + inv.name + " has N = " + std::to_string(inv.dim) +
                           ", start has N = " + std::to_string(y0.size()));
    }
    Tracker t{&inv, DriftReport{system, inv.name, eps, steps, 0.0, std::nullopt, StopKind::none, ""}};
    try {
      t.f0 = inv(y0, eval_eps);
      if (!std::isfinite(t.f0)) t.stop(0, StopKind::domain, "invariant not finite");
      t.scale = std::max(1.0, std::abs(t.f0));
      if (t.active) t.add_kappa(y0, eval_eps);
    } catch (const DomainError& e) {
      t.stop(0, StopKind::domain, e.what());
    }
    trackers.push_back(std::move(t));
  }
  return trackers;
}

bool any_active(const std::vector<Tracker>& trackers) {
  return std::any_of(trackers.begin(), trackers.end(), [](const Tracker& t) { return t.active; });
}

bool blown_up(const StateVector& y) {
  return std::any_of(y.begin(), y.end(), [](double v) { return !(std::abs(v) <= kBlowupThreshold); });
}

std::vector<DriftReport> collect(std::vector<Tracker>& trackers) {
  std::vector<DriftReport> out;
  out.reserve(trackers.size());
  for (auto& t : trackers) out.push_back(std::move(t.report));
  return out;
}

template <class Step>
std::vector<DriftReport> run_drift(std::vector<Tracker> trackers, const StateVector& y0,
                                   double eval_eps, std::size_t steps, Step step) {
  StateVector y = y0;
  for (std::size_t n = 1; n <= steps && any_active(trackers); ++n) {
    try {
      y = step(y);
    } catch (const Error& e) {
      // Singular step, blowup, or a map leaving its own domain.
      for (auto& t : trackers) t.stop(n, StopKind::orbit, e.what());
      break;
    }
    if (blown_up(y)) {
      for (auto& t : trackers) t.stop(n, StopKind::orbit, "coordinates exceeded the blowup threshold");
      break;
    }
    for (auto& t : trackers) t.observe(y, eval_eps, n);
  }
  return collect(trackers);
}

}  // namespace

std::vector<DriftReport> drift_reports(const DiscreteMap& map, const std::vector<Invariant>& invs,
                                       const StateVector& y0, double eps, std::size_t steps) {
  auto trackers = start_trackers(map.name, invs, y0, eps, eps, steps);
  return run_drift(std::move(trackers), y0, eps, steps,
                   [&](const StateVector& y) { return map(y, eps); });
}

DriftReport drift_report(const DiscreteMap& map, const Invariant& inv, const StateVector& y0,
                         double eps, std::size_t steps) {
  return drift_reports(map, std::vector<Invariant>{inv}, y0, eps, steps).front();
}

std::vector<DriftReport> drift_reports(const FlowSpec& flow, const std::vector<Invariant>& invs,
                                       const StateVector& y0, double dt, std::size_t steps) {
  auto trackers = start_trackers(flow.name, invs, y0, dt, 0.0, steps);
  return run_drift(std::move(trackers), y0, 0.0, steps,
                   [&](const StateVector& y) { return rk4_step(flow, y, dt); });
}

// --- volume, rank, defect ------------------------------------------------------

double volume_check(const DiscreteMap& map, const Density& psi, const StateVector& y, double eps) {
  const double psi_y = psi(y, eps);
  if (psi_y == 0.0 || !std::isfinite(psi_y)) throw DomainError("density vanishes at the start point");
  const auto next = map(y, eps);
  const double ratio = psi(next, eps) / psi_y;
  const double jac = fd_jacobian([&](const StateVector& p) { return map(p, eps); }, y).determinant();
  return std::abs(jac - ratio) / std::abs(jac);
}

int independence_rank(const std::vector<Invariant>& invs, const StateVector& y, double eps) {
  if (invs.empty()) return 0;
  Matrix grads(static_cast<Eigen::Index>(invs.size()), static_cast<Eigen::Index>(y.size()));
  for (std::size_t r = 0; r < invs.size(); ++r) {
    const auto g = fd_gradient([&](const StateVector& p) { return invs[r](p, eps); }, y);
    for (std::size_t c = 0; c < g.size(); ++c) {
      grads(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = g[c];
    }
  }
  const Eigen::JacobiSVD<Matrix> svd(grads);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > 1e-8 * sv(0)) ++rank;
  }
  return rank;
}

DefectStudy defect_study(const DiscreteMap& map, const Invariant& candidate, const StateVector& y0,
                         const std::vector<double>& eps_list, std::optional<double> horizon) {
  if (eps_list.empty()) throw ParameterError("defect study needs at least one eps");
  for (std::size_t k = 1; k < eps_list.size(); ++k) {
    if (!(eps_list[k] < eps_list[k - 1])) throw ParameterError("eps list must be strictly decreasing");
  }
  const double t_total = horizon.value_or(time_per_step(map.scale, eps_list.front()));
  if (t_total < 0.0) throw ParameterError("horizon must be non-negative");

  DefectStudy out;
  for (double eps : eps_list) {
    const double dt = time_per_step(map.scale, eps);
    std::size_t n = 1;
    if (t_total > 0.0 && dt > 0.0) n = std::max<long long>(1, std::llround(t_total / dt));
    StateVector y = y0;
    for (std::size_t k = 0; k < n; ++k) y = map(y, eps);
    out.eps.push_back(eps);
    out.steps.push_back(n);
    out.defects.push_back(std::abs(candidate(y, eps) - candidate(y0, eps)));
  }

  constexpr double kExactDefect = 1e-14;
  if (std::all_of(out.defects.begin(), out.defects.end(),
                  [](double d) { return d <= kExactDefect; })) {
    out.slope = kExactSlope;
    return out;
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int m = 0;
  for (std::size_t k = 0; k < out.eps.size(); ++k) {
    if (!(out.defects[k] > 0.0) || !(out.eps[k] > 0.0)) continue;
    const double lx = std::log(out.eps[k]), ly = std::log(out.defects[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m < 2) {
    out.slope = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  out.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return out;
}

double defect_order(const DiscreteMap& map, const Invariant& candidate, const StateVector& y0,
                    const std::vector<double>& eps_list, std::optional<double> horizon) {
  return defect_study(map, candidate, y0, eps_list, horizon).slope;
}

// --- identities ----------------------------------------------------------------

double verify_phi_functional_equation(std::size_t n, const StateVector& y, double eps,
                                      const InvariantFn& phi) {
  require_dim(y, n, "functional equation");
  require_positive(y, "functional equation");
  const auto next = gen_hk_explicit(y, eps);
  require_positive(next, "functional equation");
  double s = 0.0, s_next = 0.0;
  for (double v : y) s += v;
  for (double v : next) s_next += v;
  const double lhs = phi(next, eps) / phi(y, eps);
  const double rhs = (1.0 + eps * s_next) / (1.0 - eps * s) *
                     std::pow(product(y) / product(next), 1.0 / (static_cast<double>(n) - 2.0));
  return std::abs(lhs - rhs) / std::abs(rhs);
}

double verify_poly_identity_N4(const StateVector& y, double eps) {
  require_dim(y, 4, "polynomial identity");
  const double d = D_polynomial(y, eps);
  double worst = 0.0;
  for (auto [i, j] : pairs(4)) {
    std::array<std::size_t, 2> rest{};
    std::size_t r = 0;
    for (std::size_t m = 0; m < 4; ++m) {
      if (m != i && m != j) rest[r++] = m;
    }
    const auto [k, l] = rest;
    const double uk = 1.0 + eps * y[k], ul = 1.0 + eps * y[l];
    const double lhs =
        D_i_polynomial(y, eps, i) * D_i_polynomial(y, eps, j) - eps * eps * y[i] * y[j] * uk * uk * ul * ul;
    const double rhs = (1.0 - eps * eps * y[k] * y[l]) * d;
    worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(d)));
  }
  return worst;
}

double verify_relation_qq(RelationMap map, const StateVector& y, double eps) {
  const auto next = map == RelationMap::gen_hk ? gen_hk_explicit(y, eps) : alt_map(y, eps);
  double value = 0.0;
  if (map == RelationMap::gen_hk) {
    double s = 0.0, s_next = 0.0;
    for (double v : y) s += v;
    for (double v : next) s_next += v;
    value = (1.0 - eps * s) / (1.0 + eps * s_next);
  } else {
    value = R_function(y, eps);
  }
  double worst = 0.0;
  for (auto [i, j] : pairs(y.size())) {
    const double h = h_ratio(y, i, j);
    if (h == 0.0) throw DomainError("relation needs distinct coordinates");
    worst = std::max(worst, std::abs(h_ratio(next, i, j) / h - value));
  }
  return worst;
}

StateVector random_admissible_start(std::mt19937_64& rng, std::size_t n, double lo, double hi,
                                    double min_gap) {
  if (n < 3) throw DimensionError("start needs N >= 3");
  if (!(hi > lo) || (hi - lo) < min_gap * static_cast<double>(n)) {
    throw ParameterError("sampling box too small for the requested gap");
  }
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (;;) {
    for (auto& c : v) c = dist(rng);
    bool ok = true;
    for (auto [i, j] : pairs(n)) ok = ok && std::abs(v[i] - v[j]) >= min_gap;
    if (ok) return StateVector(std::move(v));
  }
}

}  // namespace kov
