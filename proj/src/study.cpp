#include "kov/study.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <thread>

#include "kov/hk_engine.hpp"

namespace kov {

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn, unsigned workers) {
  if (count == 0) return;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));

  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::size_t trial) {
  const auto t = static_cast<std::uint64_t>(trial);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(t >> 32)};
  return std::mt19937_64(seq);
}

double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int m = 0;
  for (std::size_t k = 0; k < std::min(xs.size(), ys.size()); ++k) {
    if (!(xs[k] > 0.0) || !(ys[k] > 0.0)) continue;
    const double lx = std::log(xs[k]), ly = std::log(ys[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  const double den = m * sxx - sx * sx;
  if (m < 2 || den == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (m * sxy - sx * sy) / den;
}

// --- convergence --------------------------------------------------------------

ConvergenceResult convergence_study(const std::string& map_name, std::size_t n,
                                    const StateVector& y0, const std::vector<double>& eps_list,
                                    double t_total, std::optional<double> reference_dt) {
  if (eps_list.empty()) throw ParameterError("convergence study needs at least one eps");
  for (std::size_t k = 0; k < eps_list.size(); ++k) {
    if (!(eps_list[k] > 0.0)) throw ParameterError("eps values must be positive");
    if (k > 0 && !(eps_list[k] < eps_list[k - 1])) {
      throw ParameterError("eps list must be strictly decreasing");
    }
  }
  if (!(t_total > 0.0)) throw ParameterError("total time must be positive");

  const DiscreteMap map = map_by_name(map_name, n);
  const std::size_t dim = map.dim == 0 ? n : map.dim;
  if (y0.size() != dim) {
    throw DimensionError("start has N = " + std::to_string(y0.size()) + ", map " + map_name +
                         " needs N = " + std::to_string(dim));
  }
  const FlowSpec flow = flow_by_name(flow_name_for_map(map_name), dim, 2.0);

  ConvergenceResult out;
  out.map = map_name;
  out.flow = flow.name;
  out.n = dim;
  out.t_total = t_total;
  out.reference_dt = reference_dt.value_or(t_total / std::ceil(t_total / 1e-4 - 1e-9));
  const StateVector reference =
      integrate_reference(flow, y0, t_total, out.reference_dt).final_state();

  std::vector<double> errors;
  for (double eps : eps_list) {
    const double tau = time_per_step(map.scale, eps);
    const auto k = std::llround(t_total / tau);
    if (k < 1 || std::abs(static_cast<double>(k) * tau - t_total) > 1e-9 * t_total) {
      throw ParameterError("eps = " + std::to_string(eps) + " does not divide the total time into " +
                           "whole map steps");
    }
    StateVector y = y0;
    for (long long s = 0; s < k; ++s) y = map(y, eps);
    double err = 0.0;
    for (std::size_t i = 0; i < dim; ++i) err = std::max(err, std::abs(y[i] - reference[i]));
    out.rows.push_back({eps, static_cast<std::size_t>(k), err});
    errors.push_back(err);
  }
  out.slope = loglog_slope(eps_list, errors);
  return out;
}

// --- identity checks ------------------------------------------------------------

namespace {

using Probe = std::function<double(std::mt19937_64&, std::size_t)>;

struct IdentitySpec {
  std::size_t natural_dim;
  bool fixed_dim;
  Probe probe;
};

double draw_eps(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(0.005, 0.1)(rng);
}

double max_rel_diff(const StateVector& a, const StateVector& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]) / (1.0 + std::abs(b[i])));
  }
  return worst;
}

InvariantFn phi_n3(std::size_t minus_index) {
  return [minus_index](const StateVector& y, double eps) {
    const double w = y[0] + y[1] + y[2] - 2.0 * y[minus_index];
    return 1.0 / (1.0 - eps * eps * w * w);
  };
}

InvariantFn phi_n4(std::size_t partner) {
  // Partition {1, partner | other two}.
  return [partner](const StateVector& y, double eps) {
    double w = y[0] + y[partner];
    for (std::size_t m = 1; m < 4; ++m) {
      if (m != partner) w -= y[m];
    }
    return 1.0 / std::sqrt(1.0 - eps * eps * w * w);
  };
}

const std::map<std::string, IdentitySpec>& identity_table() {
  static const std::map<std::string, IdentitySpec> table{
      {"n4-poly",
       {4, true,
        [](std::mt19937_64& rng, std::size_t n) {
          const auto y = random_admissible_start(rng, n);
          return verify_poly_identity_N4(y, draw_eps(rng));
        }}},
      {"r-reciprocity",
       {4, false,
        [](std::mt19937_64& rng, std::size_t n) {
          const auto y = random_admissible_start(rng, n);
          return verify_R_reciprocity(y, draw_eps(rng));
        }}},
      {"s-relations",
       {4, false,
        [](std::mt19937_64& rng, std::size_t n) {
          const auto y = random_admissible_start(rng, n);
          const auto [a, b] = verify_S_relations(y, draw_eps(rng));
          return std::max(a, b);
        }}},
      {"qq-hk",
       {4, false,
        [](std::mt19937_64& rng, std::size_t n) {
          const auto y = random_admissible_start(rng, n);
          return verify_relation_qq(RelationMap::gen_hk, y, draw_eps(rng));
        }}},
      {"qq-alt",
       {4, false,
        [](std::mt19937_64& rng, std::size_t n) {
          const auto y = random_admissible_start(rng, n);
          return verify_relation_qq(RelationMap::alt_map, y, draw_eps(rng));
        }}},
      {"d-sum",
       {4, true,
        [](std::mt19937_64& rng, std::size_t n) {
          const auto y = random_admissible_start(rng, n);
          double sum = 0.0;
          for (double d : hk_d_coefficients(y, draw_eps(rng))) sum += d;
          return std::abs(sum - 4.0);
        }}},
      {"r-product",
       {4, false,
        [](std::mt19937_64& rng, std::size_t n) {
          const auto y = random_admissible_start(rng, n);
          const double eps = draw_eps(rng);
          double p = R_function(y, eps);
          for (double v : y) p *= 1.0 + eps * v;
          const double d = D_polynomial(y, eps);
          return std::abs(p - d) / (1.0 + std::abs(d));
        }}},
      {"explicit-hk",
       {4, false,
        [](std::mt19937_64& rng, std::size_t n) {
          const auto y = random_admissible_start(rng, n);
          const double eps = draw_eps(rng);
          const auto sys = polarize(*generalized_kovalevskaya(n, 2.0).field);
          return max_rel_diff(gen_hk_explicit(y, eps), hk_step(sys, y, eps));
        }}},
      {"phi-n3",
       {3, true,
        [](std::mt19937_64& rng, std::size_t n) {
          const auto y = random_admissible_start(rng, n);
          const double eps = draw_eps(rng);
          double worst = 0.0;
          for (std::size_t j = 0; j < 3; ++j) {
            worst = std::max(worst, verify_phi_functional_equation(3, y, eps, phi_n3(j)));
          }
          return worst;
        }}},
      {"phi-n4",
       {4, true,
        [](std::mt19937_64& rng, std::size_t n) {
          const auto y = random_admissible_start(rng, n);
          const double eps = draw_eps(rng);
          double worst = 0.0;
          for (std::size_t p = 1; p < 4; ++p) {
            worst = std::max(worst, verify_phi_functional_equation(4, y, eps, phi_n4(p)));
          }
          return worst;
        }}},
      {"cosine-square",
       {3, true,
        [](std::mt19937_64& rng, std::size_t n) {
          const auto x = random_admissible_start(rng, n);
          const double eps = draw_eps(rng);
          return max_rel_diff(cosine_law_map(cosine_law_map(x, eps), eps),
                              euler_hk_explicit(x, eps));
        }}},
      {"jfg-square",
       {3, true,
        [](std::mt19937_64& rng, std::size_t n) {
          const auto y = random_admissible_start(rng, n);
          const double eps = draw_eps(rng);
          return max_rel_diff(sqrt_map_jfg(sqrt_map_jfg(y, eps), eps), pullback_map_pp(y, eps));
        }}},
      {"alt-jfg",
       {3, true,
        [](std::mt19937_64& rng, std::size_t n) {
          const auto y = random_admissible_start(rng, n);
          const double eps = draw_eps(rng);
          return max_rel_diff(alt_map(y, eps), sqrt_map_jfg(y, eps));
        }}},
      {"reversibility",
       {4, false,
        [](std::mt19937_64& rng, std::size_t n) {
          const auto y3 = random_admissible_start(rng, 3);
          const auto yn = random_admissible_start(rng, n);
          const double eps = draw_eps(rng);
          double worst = 0.0;
          for (const auto& name : map_names()) {
            const auto m = map_by_name(name, n);
            if (m.inverse_rule != InverseRule::negate_eps) continue;
            const auto& y = m.dim == 3 ? y3 : yn;
            worst = std::max(worst, max_rel_diff(m(m(y, eps), -eps), y));
          }
          return worst;
        }}},
  };
  return table;
}

}  // namespace

std::vector<std::string> identity_names() {
  std::vector<std::string> out;
  for (const auto& [name, entry] : identity_table()) out.push_back(name);
  return out;
}

CheckResult check_identity(const std::string& identity, std::size_t trials, std::uint64_t seed,
                           std::size_t n) {
  const auto& table = identity_table();
  const auto it = table.find(identity);
  if (it == table.end()) throw ParameterError("unknown identity '" + identity + "'");
  const IdentitySpec& entry = it->second;
  if (n == 0) n = entry.natural_dim;
  if (n < 3) throw DimensionError("identity checks need N >= 3");
  if (entry.fixed_dim && n != entry.natural_dim) {
    throw DimensionError("identity " + identity + " holds for N = " +
                         std::to_string(entry.natural_dim) + " only");
  }
  if (trials == 0) throw ParameterError("trials must be at least 1");

  std::vector<std::optional<double>> residuals(trials);
  parallel_for(trials, [&](std::size_t t) {
    auto rng = trial_rng(seed, t);
    try {
      residuals[t] = entry.probe(rng, n);
    } catch (const SingularStepError&) {
    } catch (const DomainError&) {
    }
  });

  CheckResult out{identity, trials, 0, 0.0};
  for (const auto& r : residuals) {
    if (!r) {
      ++out.skipped;
    } else if (std::isnan(*r)) {
      out.max_residual = *r;
    } else if (!std::isnan(out.max_residual)) {
      out.max_residual = std::max(out.max_residual, *r);
    }
  }
  return out;
}

// --- drift batches ---------------------------------------------------------------

std::vector<DriftTrial> drift_batch(const DiscreteMap& map, const std::vector<Invariant>& invs,
                                    std::size_t n, double eps, std::size_t steps,
                                    std::size_t trials, std::uint64_t seed,
                                    std::size_t max_restarts) {
  if (steps == 0) throw ParameterError("drift needs steps >= 1");
  if (map.dim != 0 && map.dim != n) {
    throw DimensionError("map " + map.name + " needs N = " + std::to_string(map.dim));
  }
  std::vector<DriftTrial> out(trials);
  parallel_for(trials, [&](std::size_t t) {
    auto rng = trial_rng(seed, t);
    DriftTrial& trial = out[t];
    trial.trial = t;
    StateVector y = random_admissible_start(rng, n);
    trial.start = y.values();
    for (const auto& inv : invs) {
      trial.reports.push_back({map.name, inv.name, eps, steps, 0.0, std::nullopt, StopKind::none, ""});
    }
    std::size_t done = 0;
    while (done < steps) {
      const auto segment = drift_reports(map, invs, y, eps, steps - done);
      std::optional<std::size_t> orbit_stop;
      for (std::size_t k = 0; k < segment.size(); ++k) {
        auto& acc = trial.reports[k];
        const auto& rep = segment[k];
        acc.max_rel_drift = std::max(acc.max_rel_drift, rep.max_rel_drift);
        acc.rounding_ratio = std::max(acc.rounding_ratio, rep.rounding_ratio);
        if (rep.first_blowup_step && !acc.first_blowup_step) {
          acc.first_blowup_step = done + *rep.first_blowup_step;
          acc.stop_kind = rep.stop_kind;
          acc.stop_reason = rep.stop_reason;
        }
        if (rep.stop_kind == StopKind::orbit) orbit_stop = rep.first_blowup_step;
      }
      if (!orbit_stop || trial.restarts == max_restarts) break;
      done += std::max<std::size_t>(1, *orbit_stop);
      ++trial.restarts;
      y = random_admissible_start(rng, n);
    }
  });
  return out;
}

std::vector<DriftReport> summarize(const std::vector<DriftTrial>& trials) {
  std::vector<DriftReport> out;
  for (const auto& trial : trials) {
    if (out.empty()) {
      out = trial.reports;
      continue;
    }
    for (std::size_t k = 0; k < out.size(); ++k) {
      const auto& rep = trial.reports[k];
      out[k].max_rel_drift = std::max(out[k].max_rel_drift, rep.max_rel_drift);
      out[k].rounding_ratio = std::max(out[k].rounding_ratio, rep.rounding_ratio);
      if (rep.first_blowup_step &&
          (!out[k].first_blowup_step || *rep.first_blowup_step < *out[k].first_blowup_step)) {
        out[k].first_blowup_step = rep.first_blowup_step;
        out[k].stop_kind = rep.stop_kind;
        out[k].stop_reason = rep.stop_reason;
      }
    }
  }
  return out;
}

// --- trajectories ------------------------------------------------------------------

namespace {

std::vector<double> evaluate_all(const std::vector<Invariant>& invs, const StateVector& y,
                                 double eps) {
  std::vector<double> out;
  out.reserve(invs.size());
  for (const auto& inv : invs) {
    try {
      out.push_back(inv(y, eps));
    } catch (const DomainError&) {
      out.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  return out;
}

template <class Step>
MapRun run_steps(const StateVector& y0, double dt, std::size_t steps,
                 const std::vector<Invariant>& invs, double eval_eps, Step step) {
  MapRun run;
  for (const auto& inv : invs) run.record.invariant_names.push_back(inv.name);
  run.record.rows.push_back({0, 0.0, y0, evaluate_all(invs, y0, eval_eps)});
  StateVector y = y0;
  for (std::size_t k = 1; k <= steps; ++k) {
    try {
      y = step(y);
    } catch (const Error& e) {
      run.failure = "step " + std::to_string(k) + ": " + e.what();
      break;
    }
    if (std::any_of(y.begin(), y.end(), [](double v) { return !(std::abs(v) <= kBlowupThreshold); })) {
      run.failure = "step " + std::to_string(k) + ": coordinates exceeded the blowup threshold";
      break;
    }
    run.record.rows.push_back(
        {k, static_cast<double>(k) * dt, y, evaluate_all(invs, y, eval_eps)});
  }
  return run;
}

}  // namespace

MapRun run_map(const DiscreteMap& map, const StateVector& y0, double eps, std::size_t steps,
               const std::vector<Invariant>& invs) {
  return run_steps(y0, time_per_step(map.scale, eps), steps, invs, eps,
                   [&](const StateVector& y) { return map(y, eps); });
}

MapRun run_flow(const FlowSpec& flow, const StateVector& y0, double dt, std::size_t steps,
                const std::vector<Invariant>& invs) {
  return run_steps(y0, dt, steps, invs, 0.0,
                   [&](const StateVector& y) { return rk4_step(flow, y, dt); });
}

}  // namespace kov
