#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kov/flows.hpp"
#include "kov/invariants.hpp"
#include "kov/study.hpp"

namespace kov {

using Json = nlohmann::json;

enum class Format { csv, json };

Format parse_format(const std::string& s);

/// 17 significant digits, enough to round-trip any double; "nan", "inf" and
/// "-inf" for non-finite values.
std::string format_double(double v);

struct IndependenceRow {
  std::string family;
  std::size_t n = 0;
  double eps = 0.0;
  std::size_t point = 0;
  int rank = 0;
};

// CSV writers emit a header row first. Metadata that does not fit the
// columns (fitted slope, abort status) follows as '#'-prefixed lines.

void write_drift_csv(std::ostream& os, const std::vector<DriftReport>& reports);
void write_convergence_csv(std::ostream& os, const ConvergenceResult& result);
void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& record);
void write_check_csv(std::ostream& os, const CheckResult& result);
void write_independence_csv(std::ostream& os, const std::vector<IndependenceRow>& rows);

Json to_json(const DriftReport& report);
Json to_json(const std::vector<DriftReport>& reports);
Json to_json(const ConvergenceResult& result);
Json to_json(const TrajectoryRecord& record);
Json to_json(const CheckResult& result);
Json to_json(const std::vector<IndependenceRow>& rows);

}  // namespace kov
