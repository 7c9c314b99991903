#include "kov/flows.hpp"

#include <cmath>
#include <string>

namespace kov {

namespace {

void require_dim(std::size_t n, std::size_t min_dim, const char* what) {
  if (n < min_dim) {
    throw DimensionError(std::string(what) + " needs N >= " + std::to_string(min_dim) +
                         ", got " + std::to_string(n));
  }
}

void check_finite(std::span<const double> y, double t) {
  for (double v : y) {
    if (!std::isfinite(v) || std::abs(v) > kBlowupThreshold) {
      throw BlowupError("trajectory left the finite range after t = " + std::to_string(t), t);
    }
  }
}

}  // namespace

double SymmetricPolynomial::operator()(std::span<const double> y) const {
  if (coeffs.size() == 1) {
    double s = 0.0;
    for (double v : y) s += v;
    return coeffs[0] * s;
  }
  if (coeffs.size() > y.size()) {
    throw DimensionError("symmetric polynomial uses e_k beyond the state dimension");
  }
  const auto e = elementary_symmetric_all(y);
  double s = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) s += coeffs[k] * e[k + 1];
  return s;
}

StateVector FlowSpec::operator()(const StateVector& y) const {
  if (y.size() != dim) {
    throw DimensionError("flow " + name + " has dimension " + std::to_string(dim) +
                         ", point has " + std::to_string(y.size()));
  }
  return StateVector(rhs(y.coords()));
}

FlowSpec kovalevskaya3() {
  std::vector<QuadraticTerm> terms;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) terms.push_back({i, i, j, i == j ? -1.0 : 1.0});
  }
  FlowSpec f;
  f.name = "kovalevskaya3";
  f.dim = 3;
  f.rhs = [](std::span<const double> y) {
    return std::vector<double>{y[0] * (-y[0] + y[1] + y[2]), y[1] * (-y[1] + y[2] + y[0]),
                               y[2] * (-y[2] + y[0] + y[1])};
  };
  f.field.emplace(3, terms);
  return f;
}

FlowSpec generalized_kovalevskaya(std::size_t n, double alpha) {
  require_dim(n, 3, "generalized Kovalevskaya system");
  if (alpha == static_cast<double>(n)) {
    throw ParameterError("generalized Kovalevskaya system requires alpha != N");
  }
  std::vector<QuadraticTerm> terms;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) terms.push_back({i, i, j, i == j ? 1.0 - alpha : 1.0});
  }
  FlowSpec f;
  f.name = "gen-kov";
  f.dim = n;
  f.alpha = alpha;
  f.rhs = [alpha](std::span<const double> y) {
    double s = 0.0;
    for (double v : y) s += v;
    std::vector<double> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] * (-alpha * y[i] + s);
    return out;
  };
  f.field.emplace(n, terms);
  return f;
}

FlowSpec generalized_kovalevskaya(std::size_t n, double alpha, SymmetricPolynomial s) {
  require_dim(n, 3, "generalized Kovalevskaya system");
  if (alpha == static_cast<double>(n)) {
    throw ParameterError("generalized Kovalevskaya system requires alpha != N");
  }
  if (s.coeffs.empty() || s.coeffs.size() > n) {
    throw ParameterError("custom s needs between 1 and N coefficients over e_1..e_N");
  }
  FlowSpec f;
  f.name = "gen-kov";
  f.dim = n;
  f.alpha = alpha;
  f.s_mode = SMode::custom_symmetric;
  f.s = s;
  f.rhs = [alpha, s](std::span<const double> y) {
    const double sv = s(y);
    std::vector<double> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] * (-alpha * y[i] + sv);
    return out;
  };
  return f;
}

FlowSpec euler_top3() {
  FlowSpec f;
  f.name = "euler3";
  f.dim = 3;
  f.rhs = [](std::span<const double> x) {
    return std::vector<double>{x[1] * x[2], x[2] * x[0], x[0] * x[1]};
  };
  f.field.emplace(3, std::initializer_list<QuadraticTerm>{{0, 1, 2, 1.0}, {1, 2, 0, 1.0},
                                                          {2, 0, 1, 1.0}});
  return f;
}

FlowSpec generalized_euler(std::size_t n) {
  require_dim(n, 3, "generalized Euler top");
  if (n == 3) {
    auto f = euler_top3();
    f.name = "gen-euler";
    return f;
  }
  FlowSpec f;
  f.name = "gen-euler";
  f.dim = n;
  f.rhs = [](std::span<const double> x) {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      double p = 1.0;
      for (std::size_t j = 0; j < x.size(); ++j) {
        if (j != i) p *= x[j];
      }
      out[i] = p;
    }
    return out;
  };
  return f;
}

FlowSpec flow_by_name(const std::string& name, std::size_t n, double alpha) {
  if (name == "kovalevskaya3") return kovalevskaya3();
  if (name == "gen-kov") return generalized_kovalevskaya(n, alpha);
  if (name == "euler3") return euler_top3();
  if (name == "gen-euler") return generalized_euler(n);
  throw ParameterError("unknown system '" + name +
                       "' (expected kovalevskaya3, gen-kov, euler3, gen-euler)");
}

StateVector rk4_step(const FlowSpec& flow, const StateVector& y, double dt, double t) {
  const std::size_t n = y.size();
  const auto& y0 = y.values();
  std::vector<double> tmp(n);

  auto stage = [&](const std::vector<double>& base, const std::vector<double>& k, double c) {
    for (std::size_t i = 0; i < n; ++i) tmp[i] = base[i] + c * k[i];
    check_finite(tmp, t);
    auto out = flow.rhs(tmp);
    check_finite(out, t);
    return out;
  };

  auto k1 = flow.rhs(y0);
  check_finite(k1, t);
  auto k2 = stage(y0, k1, 0.5 * dt);
  auto k3 = stage(y0, k2, 0.5 * dt);
  auto k4 = stage(y0, k3, dt);

  std::vector<double> next(n);
  for (std::size_t i = 0; i < n; ++i) {
    next[i] = y0[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  check_finite(next, t);
  return StateVector(std::move(next));
}

TrajectoryRecord integrate_reference(const FlowSpec& flow, const StateVector& y0, double t_end,
                                     double dt) {
  if (!(dt > 0.0)) throw ParameterError("integration step dt must be positive");
  if (!(t_end >= 0.0)) throw ParameterError("t_end must be non-negative");
  if (y0.size() != flow.dim) throw DimensionError("initial state does not match flow dimension");

  const double ratio = t_end / dt;
  const auto steps = static_cast<std::size_t>(std::llround(ratio));
  if (std::abs(ratio - static_cast<double>(steps)) > 1e-9 * std::max(1.0, ratio)) {
    throw ParameterError("dt does not divide t_end");
  }

  TrajectoryRecord rec;
  rec.rows.reserve(steps + 1);
  rec.rows.push_back({0, 0.0, y0, {}});
  StateVector y = y0;
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    y = rk4_step(flow, y, dt, t);
    rec.rows.push_back({k + 1, static_cast<double>(k + 1) * dt, y, {}});
  }
  return rec;
}

double verify_hyperelliptic_relation(std::size_t n, const TrajectoryRecord& traj) {
  if (traj.rows.empty()) return 0.0;
  const auto flow = generalized_euler(n);
  const auto& x0 = traj.rows.front().state;
  if (x0.size() != n) throw DimensionError("trajectory dimension does not match N");

  std::vector<double> e_j1(n);
  for (std::size_t j = 1; j < n; ++j) e_j1[j] = x0[j] * x0[j] - x0[0] * x0[0];

  double worst = 0.0;
  for (const auto& row : traj.rows) {
    const auto& x = row.state;
    const double x1dot = flow.rhs(x.coords())[0];
    double prod = 1.0;
    for (std::size_t j = 1; j < n; ++j) prod *= x[0] * x[0] + e_j1[j];
    const double r = std::abs(x1dot * x1dot - prod) / (1.0 + std::abs(prod));
    worst = std::max(worst, r);
  }
  return worst;
}

}  // namespace kov
