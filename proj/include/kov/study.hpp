#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kov/flows.hpp"
#include "kov/invariants.hpp"
#include "kov/maps.hpp"

namespace kov {

/// Runs fn(0), ..., fn(count - 1) on a pool of worker threads. Each index
/// runs exactly once; results must be written to per-index slots. The first
/// exception (by index) is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  unsigned workers = 0);

/// Generator for trial `trial` of a batch seeded with `seed`; independent of
/// the worker that runs it.
std::mt19937_64 trial_rng(std::uint64_t seed, std::size_t trial);

// --- convergence --------------------------------------------------------------

struct ConvergenceRow {
  double eps = 0.0;
  std::size_t steps = 0;
  double error = 0.0;
};

struct ConvergenceResult {
  std::string map;
  std::string flow;
  std::size_t n = 0;
  double t_total = 0.0;
  double reference_dt = 0.0;
  std::vector<ConvergenceRow> rows;
  /// Least-squares slope of log error against log eps; NaN with one row.
  double slope = 0.0;
};

/// Compares k = t_total / (time per step) map steps against the RK4
/// reference of the matching flow at t_total. Every eps must give an integer
/// k (to 1e-9 relative). reference_dt defaults to the largest divisor of
/// t_total not exceeding 1e-4.
ConvergenceResult convergence_study(const std::string& map_name, std::size_t n,
                                    const StateVector& y0, const std::vector<double>& eps_list,
                                    double t_total, std::optional<double> reference_dt = {});

/// Least-squares slope of log(ys) against log(xs), skipping non-positive
/// entries; NaN when fewer than two points remain.
double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys);

// --- identity checks ------------------------------------------------------------

struct CheckResult {
  std::string identity;
  std::size_t trials = 0;
  /// Trials that hit a singular or out-of-domain point and were skipped.
  std::size_t skipped = 0;
  double max_residual = 0.0;
};

/// Names accepted by check_identity.
std::vector<std::string> identity_names();

/// Evaluates an exact identity at `trials` random points drawn from
/// [0.1, 2]^N with eps uniform in [0.005, 0.1]. n = 0 picks each
/// identity's natural dimension (4 for the N-dimensional maps).
CheckResult check_identity(const std::string& identity, std::size_t trials, std::uint64_t seed,
                           std::size_t n = 0);

// --- seeded drift batches -------------------------------------------------------

struct DriftTrial {
  std::size_t trial = 0;
  std::vector<double> start;
  /// Orbit failures (singular step or blowup) answered with a fresh start.
  std::size_t restarts = 0;
  std::vector<DriftReport> reports;
};

/// Iterates `steps` map steps from a random start per trial. When the orbit
/// hits a singular point or blows up, a new start is drawn from the trial's
/// generator and the remaining steps continue from there (at most
/// max_restarts times); drift is always measured against the start of the
/// current segment. Invariants that leave their real domain stop being
/// evaluated for the rest of that segment.
std::vector<DriftTrial> drift_batch(const DiscreteMap& map, const std::vector<Invariant>& invs,
                                    std::size_t n, double eps, std::size_t steps,
                                    std::size_t trials, std::uint64_t seed,
                                    std::size_t max_restarts = 100);

/// One summary row per invariant: worst drift over all trials, with
/// first_blowup_step the earliest stop seen.
std::vector<DriftReport> summarize(const std::vector<DriftTrial>& trials);

/// Trajectory of a map with the invariants it is registered to conserve.
/// Stops at the first failing step; the caller sees the partial record and
/// the error in `failure`.
struct MapRun {
  TrajectoryRecord record;
  std::optional<std::string> failure;
};
MapRun run_map(const DiscreteMap& map, const StateVector& y0, double eps, std::size_t steps,
               const std::vector<Invariant>& invs);

/// Same for a flow with RK4 step dt; invariants are evaluated at eps = 0.
MapRun run_flow(const FlowSpec& flow, const StateVector& y0, double dt, std::size_t steps,
                const std::vector<Invariant>& invs);

}  // namespace kov
