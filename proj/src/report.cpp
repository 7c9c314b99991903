#include "kov/report.hpp"

#include <cmath>
#include <cstdio>

namespace kov {

namespace {

Json number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

Json optional_step(const std::optional<std::size_t>& s) {
  if (s) return *s;
  return nullptr;
}

const char* to_string(StopKind k) {
  switch (k) {
    case StopKind::orbit:
      return "orbit";
    case StopKind::domain:
      return "domain";
    case StopKind::none:
      break;
  }
  return "none";
}

}  // namespace

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw ParameterError("format must be csv or json, got '" + s + "'");
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_drift_csv(std::ostream& os, const std::vector<DriftReport>& reports) {
  os << "map,invariant,eps,steps,max_rel_drift,first_blowup_step\n";
  for (const auto& r : reports) {
    os << r.system << ',' << r.invariant << ',' << format_double(r.eps) << ',' << r.steps << ','
       << format_double(r.max_rel_drift) << ',';
    if (r.first_blowup_step) os << *r.first_blowup_step;
    os << '\n';
  }
}

void write_convergence_csv(std::ostream& os, const ConvergenceResult& result) {
  os << "eps,error\n";
  for (const auto& row : result.rows) {
    os << format_double(row.eps) << ',' << format_double(row.error) << '\n';
  }
  os << "# slope=" << (std::isnan(result.slope) ? "undefined" : format_double(result.slope)) << '\n';
}

void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& record) {
  const std::size_t n = record.rows.empty() ? 0 : record.rows.front().state.size();
  os << "step,t";
  for (std::size_t i = 0; i < n; ++i) os << ",y_" << i + 1;
  for (const auto& name : record.invariant_names) os << ',' << name;
  os << '\n';
  for (const auto& row : record.rows) {
    os << row.step << ',' << format_double(row.t);
    for (double v : row.state) os << ',' << format_double(v);
    for (double v : row.invariants) os << ',' << format_double(v);
    os << '\n';
  }
}

void write_check_csv(std::ostream& os, const CheckResult& result) {
  os << "identity,trials,skipped,max_residual\n"
     << result.identity << ',' << result.trials << ',' << result.skipped << ','
     << format_double(result.max_residual) << '\n';
}

void write_independence_csv(std::ostream& os, const std::vector<IndependenceRow>& rows) {
  os << "family,n,eps,point,rank\n";
  for (const auto& r : rows) {
    os << r.family << ',' << r.n << ',' << format_double(r.eps) << ',' << r.point << ',' << r.rank
       << '\n';
  }
}

Json to_json(const DriftReport& r) {
  return {{"map", r.system},
          {"invariant", r.invariant},
          {"eps", number(r.eps)},
          {"steps", r.steps},
          {"max_rel_drift", number(r.max_rel_drift)},
          {"first_blowup_step", optional_step(r.first_blowup_step)},
          {"stop_kind", to_string(r.stop_kind)},
          {"stop_reason", r.stop_reason},
          {"rounding_ratio", number(r.rounding_ratio)}};
}

Json to_json(const std::vector<DriftReport>& reports) {
  Json rows = Json::array();
  for (const auto& r : reports) rows.push_back(to_json(r));
  return rows;
}

Json to_json(const ConvergenceResult& result) {
  Json rows = Json::array();
  for (const auto& row : result.rows) {
    rows.push_back({{"eps", row.eps}, {"steps", row.steps}, {"error", number(row.error)}});
  }
  return {{"map", result.map},         {"flow", result.flow},
          {"n", result.n},             {"t_total", result.t_total},
          {"reference_dt", result.reference_dt}, {"rows", rows},
          {"slope", number(result.slope)}};
}

Json to_json(const TrajectoryRecord& record) {
  Json rows = Json::array();
  for (const auto& row : record.rows) {
    Json state = Json::array(), invs = Json::array();
    for (double v : row.state) state.push_back(v);
    for (double v : row.invariants) invs.push_back(number(v));
    rows.push_back({{"step", row.step}, {"t", row.t}, {"y", state}, {"invariants", invs}});
  }
  return {{"invariant_names", record.invariant_names}, {"rows", rows}};
}

Json to_json(const CheckResult& result) {
  return {{"identity", result.identity},
          {"trials", result.trials},
          {"skipped", result.skipped},
          {"max_residual", number(result.max_residual)}};
}

Json to_json(const std::vector<IndependenceRow>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    out.push_back(
        {{"family", r.family}, {"n", r.n}, {"eps", r.eps}, {"point", r.point}, {"rank", r.rank}});
  }
  return out;
}

}  // namespace kov
