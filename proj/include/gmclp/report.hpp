#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "gmclp/bnc.hpp"

namespace gmclp {

/// Geometric mean of (v + shift) minus shift. Empty input gives 0.
double shifted_geomean(std::span<const double> values, double shift = 1.0);

/// (z_LP - z) / z * 100, only defined for z > 0.
std::optional<double> lp_gap_pct(double z_lp, double z);

/// (z_LP - z_root) / (z_LP - z) * 100, or 100 when z_LP - z < 1e-9.
double gap_improvement_pct(double z_lp, double z_root, double z);

struct RunRecord {
  std::string instance_id;
  std::string group;  // aggregation key, e.g. a weight scheme
  std::string setting;
  std::string status;
  std::string z;  // exact rational text
  double z_value = 0.0;
  double z_lp = 0.0;
  double z_root = 0.0;
  std::optional<double> lpg_pct;
  double gi_pct = 0.0;
  double delta_v_pct = 0.0;
  double delta_c_pct = 0.0;
  long long nodes = 0;
  long long cuts = 0;
  double presolve_time = 0.0;
  double separation_time = 0.0;
  double total_time = 0.0;
  std::string error;  // set when the run failed before producing a result
};

RunRecord make_record(const std::string& instance_id, const std::string& group, const std::string& setting,
                      const BncResult& result);

struct AggregateRow {
  std::string group;
  std::string setting;
  int runs = 0;
  int solved = 0;
  double time_sgm = 0.0;   // shifted geometric mean, seconds
  double nodes_sgm = 0.0;  // shifted geometric mean
  double gi_mean = 0.0;
  double delta_v_mean = 0.0;
  double delta_c_mean = 0.0;
};

struct RunReport {
  std::vector<RunRecord> records;
  std::vector<AggregateRow> aggregates;
};

/// Groups records by (group, setting) in first-seen order.
std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& records);

nlohmann::ordered_json to_json(const RunRecord& r);
nlohmann::ordered_json to_json(const AggregateRow& a);
nlohmann::ordered_json to_json(const RunReport& report);
nlohmann::ordered_json to_json(const PresolveReport& r);
RunRecord record_from_json(const nlohmann::json& j);

void write_csv(std::ostream& out, const std::vector<RunRecord>& records);
void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows);

}  // namespace gmclp
