// Command-line front end: simulations, drift and convergence studies,
// identity checks and independence ranks, written as CSV or JSON.
//
// Exit status: 0 success, 1 invalid configuration, 2 the run hit a singular
// or out-of-domain point (partial output is still written, with a status).

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kov/flows.hpp"
#include "kov/invariants.hpp"
#include "kov/maps.hpp"
#include "kov/report.hpp"
#include "kov/study.hpp"

namespace {

using namespace kov;

struct RunConfig {
  std::string command;
  std::string system;
  std::string map;
  std::size_t n = 3;
  bool n_given = false;
  double alpha = 2.0;
  std::optional<double> eps;
  std::vector<double> eps_list;
  std::optional<std::size_t> steps;
  std::optional<double> t_end;
  std::optional<double> dt;
  std::vector<double> y0;
  std::uint64_t seed = 1;
  std::size_t trials = 20;
  std::string identity;
  std::string family;
  std::string out;
  std::string format = "csv";
};

/// Invalid configuration, reported with exit status 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Outcome {
  Json json = Json::object();
  std::string csv;
  std::optional<std::string> failure;
};

std::vector<double> require_eps_list(const RunConfig& cfg) {
  if (cfg.eps_list.empty()) throw ConfigError("--eps-list is required");
  for (std::size_t k = 0; k < cfg.eps_list.size(); ++k) {
    if (!(cfg.eps_list[k] > 0.0)) throw ConfigError("--eps-list entries must be positive");
    if (k > 0 && !(cfg.eps_list[k] < cfg.eps_list[k - 1])) {
      throw ConfigError("--eps-list must be strictly decreasing");
    }
  }
  return cfg.eps_list;
}

double require_eps(const RunConfig& cfg) {
  if (!cfg.eps) throw ConfigError("--eps is required");
  return *cfg.eps;
}

StateVector start_point(const RunConfig& cfg, std::size_t dim) {
  if (cfg.y0.empty()) throw ConfigError("--y0 is required");
  if (cfg.y0.size() != dim) {
    throw ConfigError("--y0 has " + std::to_string(cfg.y0.size()) + " entries, expected N = " +
                      std::to_string(dim));
  }
  try {
    return StateVector(cfg.y0);
  } catch (const Error& e) {
    throw ConfigError(std::string("--y0: ") + e.what());
  }
}

std::size_t map_dim(const DiscreteMap& m, const RunConfig& cfg) { return m.dim == 0 ? cfg.n : m.dim; }

std::vector<Invariant> flow_invariants(const FlowSpec& flow, const RunConfig& cfg) {
  if (flow.name == "gen-kov" && cfg.alpha != 2.0) {
    auto invs = kovalevskaya_integrals(flow.dim, cfg.alpha);
    for (auto& inv : family(flow.dim, "cross-ratio")) invs.push_back(std::move(inv));
    return invs;
  }
  return claimed_by(flow.dim, flow.name);
}

std::vector<Invariant> filter_family(std::vector<Invariant> invs, const std::string& fam) {
  if (fam.empty()) return invs;
  std::vector<Invariant> out;
  for (auto& inv : invs) {
    if (inv.family == fam) out.push_back(std::move(inv));
  }
  if (out.empty()) throw ConfigError("no registered invariants in family '" + fam + "'");
  return out;
}

Outcome trajectory_outcome(const MapRun& run) {
  Outcome o;
  o.json = to_json(run.record);
  std::ostringstream os;
  write_trajectory_csv(os, run.record);
  o.csv = os.str();
  o.failure = run.failure;
  return o;
}

Outcome cmd_simulate(const RunConfig& cfg) {
  if (cfg.system.empty()) throw ConfigError("--system is required");
  const FlowSpec flow = flow_by_name(cfg.system, cfg.n, cfg.alpha);
  const StateVector y0 = start_point(cfg, flow.dim);
  if (!cfg.dt || !(*cfg.dt > 0.0)) throw ConfigError("--dt must be given and positive");
  std::size_t steps = 0;
  if (cfg.steps) {
    steps = *cfg.steps;
  } else if (cfg.t_end) {
    const double k = std::round(*cfg.t_end / *cfg.dt);
    if (k < 1 || std::abs(k * *cfg.dt - *cfg.t_end) > 1e-9 * *cfg.t_end) {
      throw ConfigError("--dt must divide --t-end");
    }
    steps = static_cast<std::size_t>(k);
  } else {
    throw ConfigError("one of --steps or --t-end is required");
  }
  return trajectory_outcome(run_flow(flow, y0, *cfg.dt, steps, flow_invariants(flow, cfg)));
}

Outcome cmd_map(const RunConfig& cfg) {
  if (cfg.map.empty()) throw ConfigError("--map is required");
  const DiscreteMap m = map_by_name(cfg.map, cfg.n);
  const StateVector y0 = start_point(cfg, map_dim(m, cfg));
  return trajectory_outcome(
      run_map(m, y0, require_eps(cfg), cfg.steps.value_or(1), claimed_by(map_dim(m, cfg), m.name)));
}

Outcome drift_outcome(const std::vector<DriftReport>& reports) {
  Outcome o;
  o.json["rows"] = to_json(reports);
  std::ostringstream os;
  write_drift_csv(os, reports);
  o.csv = os.str();
  return o;
}

Outcome cmd_drift(const RunConfig& cfg) {
  const std::size_t steps = cfg.steps.value_or(1000);
  if (steps == 0) throw ConfigError("--steps must be at least 1");
  if (!cfg.map.empty()) {
    const DiscreteMap m = map_by_name(cfg.map, cfg.n);
    const std::size_t dim = map_dim(m, cfg);
    const auto invs = filter_family(claimed_by(dim, m.name), cfg.family);
    const double eps = require_eps(cfg);
    if (!cfg.y0.empty()) return drift_outcome(drift_reports(m, invs, start_point(cfg, dim), eps, steps));
    if (cfg.trials == 0) throw ConfigError("--trials must be at least 1");
    return drift_outcome(summarize(drift_batch(m, invs, dim, eps, steps, cfg.trials, cfg.seed)));
  }
  if (!cfg.system.empty()) {
    const FlowSpec flow = flow_by_name(cfg.system, cfg.n, cfg.alpha);
    const auto invs = filter_family(flow_invariants(flow, cfg), cfg.family);
    const double dt = cfg.dt ? *cfg.dt : require_eps(cfg);
    return drift_outcome(drift_reports(flow, invs, start_point(cfg, flow.dim), dt, steps));
  }
  throw ConfigError("drift needs --map or --system");
}

Outcome cmd_convergence(const RunConfig& cfg) {
  if (cfg.map.empty()) throw ConfigError("--map is required");
  const DiscreteMap m = map_by_name(cfg.map, cfg.n);
  const StateVector y0 = start_point(cfg, map_dim(m, cfg));
  const auto result =
      convergence_study(cfg.map, cfg.n, y0, require_eps_list(cfg), cfg.t_end.value_or(0.2), cfg.dt);
  Outcome o;
  o.json = to_json(result);
  std::ostringstream os;
  write_convergence_csv(os, result);
  o.csv = os.str();
  return o;
}

Outcome cmd_check(const RunConfig& cfg) {
  if (cfg.identity.empty()) throw ConfigError("--identity is required");
  const auto result = check_identity(cfg.identity, cfg.trials, cfg.seed, cfg.n_given ? cfg.n : 0);
  Outcome o;
  o.json = to_json(result);
  std::ostringstream os;
  write_check_csv(os, result);
  o.csv = os.str();
  return o;
}

Outcome cmd_independence(const RunConfig& cfg) {
  if (cfg.family.empty()) throw ConfigError("--family is required");
  const auto invs = family(cfg.n, cfg.family);
  if (invs.empty()) {
    throw ConfigError("family '" + cfg.family + "' does not exist for N = " + std::to_string(cfg.n));
  }
  const double eps = cfg.eps.value_or(0.05);
  std::vector<StateVector> points;
  if (!cfg.y0.empty()) {
    points.push_back(start_point(cfg, cfg.n));
  } else {
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      auto rng = trial_rng(cfg.seed, t);
      points.push_back(random_admissible_start(rng, cfg.n));
    }
  }
  std::vector<IndependenceRow> rows;
  for (std::size_t p = 0; p < points.size(); ++p) {
    rows.push_back({cfg.family, cfg.n, eps, p, independence_rank(invs, points[p], eps)});
  }
  Outcome o;
  o.json["rows"] = to_json(rows);
  std::ostringstream os;
  write_independence_csv(os, rows);
  o.csv = os.str();
  return o;
}

Outcome dispatch(const RunConfig& cfg) {
  if (cfg.command == "simulate") return cmd_simulate(cfg);
  if (cfg.command == "map") return cmd_map(cfg);
  if (cfg.command == "drift") return cmd_drift(cfg);
  if (cfg.command == "convergence") return cmd_convergence(cfg);
  if (cfg.command == "check") return cmd_check(cfg);
  return cmd_independence(cfg);
}

void emit(const RunConfig& cfg, Format format, Outcome& o) {
  std::ostringstream text;
  if (format == Format::json) {
    Json doc = Json::object();
    doc["command"] = cfg.command;
    doc["status"] = o.failure ? "aborted" : "ok";
    if (o.failure) doc["message"] = *o.failure;
    for (auto& [key, value] : o.json.items()) doc[key] = value;
    text << doc.dump(2) << '\n';
  } else {
    text << o.csv;
    if (o.failure) text << "# status=aborted: " << *o.failure << '\n';
  }
  if (cfg.out.empty()) {
    std::cout << text.str();
    return;
  }
  std::ofstream file(cfg.out);
  if (!file) throw ConfigError("cannot open output file '" + cfg.out + "'");
  file << text.str();
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", cfg.out, "output path (default stdout)");
  sub->add_option("--n", cfg.n, "dimension N")->check(CLI::Range(3, 64));
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Simulate and verify integrable discretizations of Kovalevskaya-type systems"};
  app.require_subcommand(1);

  auto* simulate = app.add_subcommand("simulate", "RK4 trajectory of a flow with its integrals");
  add_common(simulate, cfg);
  simulate->add_option("--system", cfg.system, "kovalevskaya3, gen-kov, euler3, gen-euler");
  simulate->add_option("--alpha", cfg.alpha, "coefficient of -y_i in the generalized system");
  simulate->add_option("--y0", cfg.y0, "initial point")->delimiter(',');
  simulate->add_option("--dt", cfg.dt, "RK4 step");
  simulate->add_option("--steps", cfg.steps, "number of steps");
  simulate->add_option("--t-end", cfg.t_end, "final time (alternative to --steps)");

  auto* map = app.add_subcommand("map", "iterate a discrete map");
  add_common(map, cfg);
  map->add_option("--map", cfg.map, "map name")->check(CLI::IsMember(map_names()));
  map->add_option("--y0", cfg.y0, "initial point")->delimiter(',');
  map->add_option("--eps", cfg.eps, "step parameter");
  map->add_option("--steps", cfg.steps, "number of steps (default 1)");

  auto* drift = app.add_subcommand("drift", "drift of registered integrals along orbits");
  add_common(drift, cfg);
  drift->add_option("--map", cfg.map, "map name")->check(CLI::IsMember(map_names()));
  drift->add_option("--system", cfg.system, "flow name (RK4 drift)");
  drift->add_option("--alpha", cfg.alpha, "coefficient of -y_i in the generalized system");
  drift->add_option("--y0", cfg.y0, "initial point; omit for seeded random starts")->delimiter(',');
  drift->add_option("--eps", cfg.eps, "step parameter (RK4 step for flows unless --dt)");
  drift->add_option("--dt", cfg.dt, "RK4 step for flows");
  drift->add_option("--steps", cfg.steps, "number of steps (default 1000)");
  drift->add_option("--trials", cfg.trials, "random starts when --y0 is omitted");
  drift->add_option("--seed", cfg.seed, "seed for random starts");
  drift->add_option("--family", cfg.family, "restrict to one invariant family");

  auto* convergence = app.add_subcommand("convergence", "global error of a map against RK4");
  add_common(convergence, cfg);
  convergence->add_option("--map", cfg.map, "map name")->check(CLI::IsMember(map_names()));
  convergence->add_option("--y0", cfg.y0, "initial point")->delimiter(',');
  convergence->add_option("--eps-list", cfg.eps_list, "strictly decreasing eps values")
      ->delimiter(',');
  convergence->add_option("--t-end", cfg.t_end, "total time (default 0.2)");
  convergence->add_option("--dt", cfg.dt, "reference RK4 step");

  auto* check = app.add_subcommand("check", "evaluate an exact identity at random points");
  add_common(check, cfg);
  check->add_option("--identity", cfg.identity, "identity name")
      ->check(CLI::IsMember(identity_names()));
  check->add_option("--trials", cfg.trials, "number of random points");
  check->add_option("--seed", cfg.seed, "seed");

  auto* independence = app.add_subcommand("independence", "numerical rank of an integral family");
  add_common(independence, cfg);
  independence->add_option("--family", cfg.family, "invariant family");
  independence->add_option("--y0", cfg.y0, "point; omit for seeded random points")->delimiter(',');
  independence->add_option("--eps", cfg.eps, "step parameter (default 0.05)");
  independence->add_option("--trials", cfg.trials, "random points when --y0 is omitted");
  independence->add_option("--seed", cfg.seed, "seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  const auto* sub = app.get_subcommands().front();
  cfg.command = sub->get_name();
  cfg.n_given = sub->count("--n") > 0;

  try {
    const Format format = parse_format(cfg.format);
    Outcome outcome;
    try {
      outcome = dispatch(cfg);
    } catch (const DomainError& e) {
      outcome.failure = e.what();
    } catch (const SingularStepError& e) {
      outcome.failure = e.what();
    } catch (const BlowupError& e) {
      outcome.failure = e.what();
    }
    emit(cfg, format, outcome);
    if (outcome.failure) {
      std::cerr << "kovsim: aborted: " << *outcome.failure << '\n';
      return 2;
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "kovsim: " << e.what() << '\n';
  } catch (const Error& e) {
    std::cerr << "kovsim: " << e.what() << '\n';
  }
  return 1;
}
