#include "gmclp/report.hpp"

#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

namespace gmclp {

double shifted_geomean(std::span<const double> values, double shift) {
  if (values.empty()) return 0.0;
  double log_sum = 0.0;
  for (const auto v : values) log_sum += std::log(v + shift);
  return std::exp(log_sum / static_cast<double>(values.size())) - shift;
}

std::optional<double> lp_gap_pct(double z_lp, double z) {
  if (!(z > 0.0) || !std::isfinite(z_lp)) return std::nullopt;
  return (z_lp - z) / z * 100.0;
}

double gap_improvement_pct(double z_lp, double z_root, double z) {
  const double denom = z_lp - z;
  if (denom < 1e-9) return 100.0;
  return (z_lp - z_root) / denom * 100.0;
}

RunRecord make_record(const std::string& instance_id, const std::string& group, const std::string& setting,
                      const BncResult& result) {
  const auto& s = result.stats;
  RunRecord r;
  r.instance_id = instance_id;
  r.group = group;
  r.setting = setting;
  r.status = to_string(result.status);
  r.z = result.has_solution ? format_rational(result.solution.objective) : "";
  r.z_value = s.z;
  r.z_lp = s.z_lp;
  r.z_root = s.z_root;
  r.lpg_pct = lp_gap_pct(s.z_lp, s.z);
  r.gi_pct = gap_improvement_pct(s.z_lp, s.z_root, s.z);
  r.delta_v_pct = s.presolve.delta_v_pct;
  r.delta_c_pct = s.presolve.delta_c_pct;
  r.nodes = s.nodes;
  r.cuts = s.cuts_added;
  r.presolve_time = s.presolve_seconds;
  r.separation_time = s.separation_seconds;
  r.total_time = s.total_seconds;
  return r;
}

std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& records) {
  std::vector<AggregateRow> rows;
  std::map<std::pair<std::string, std::string>, std::vector<const RunRecord*>> by_key;
  for (const auto& r : records) {
    auto key = std::make_pair(r.group, r.setting);
    if (!by_key.contains(key)) rows.push_back({r.group, r.setting});
    by_key[key].push_back(&r);
  }
  for (auto& row : rows) {
    const auto& members = by_key[{row.group, row.setting}];
    std::vector<double> times, nodes;
    double gi = 0.0, dv = 0.0, dc = 0.0;
    int ok = 0;
    for (const auto* r : members) {
      ++row.runs;
      if (!r->error.empty()) continue;
      ++ok;
      if (r->status == "optimal") ++row.solved;
      times.push_back(r->total_time);
      nodes.push_back(static_cast<double>(r->nodes));
      gi += r->gi_pct;
      dv += r->delta_v_pct;
      dc += r->delta_c_pct;
    }
    row.time_sgm = shifted_geomean(times);
    row.nodes_sgm = shifted_geomean(nodes);
    if (ok > 0) {
      row.gi_mean = gi / ok;
      row.delta_v_mean = dv / ok;
      row.delta_c_mean = dc / ok;
    }
  }
  return rows;
}

namespace {

nlohmann::ordered_json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

nlohmann::ordered_json to_json(const RunRecord& r) {
  nlohmann::ordered_json j;
  j["instance_id"] = r.instance_id;
  if (!r.group.empty()) j["group"] = r.group;
  j["setting"] = r.setting;
  j["status"] = r.status;
  j["z"] = r.z;
  j["z_LP"] = number_or_null(r.z_lp);
  j["z_root"] = number_or_null(r.z_root);
  j["LPG%"] = r.lpg_pct ? number_or_null(*r.lpg_pct) : nlohmann::ordered_json(nullptr);
  j["GI%"] = number_or_null(r.gi_pct);
  j["ΔV%"] = r.delta_v_pct;
  j["ΔC%"] = r.delta_c_pct;
  j["nodes"] = r.nodes;
  j["cuts"] = r.cuts;
  j["presolve_time"] = r.presolve_time;
  j["separation_time"] = r.separation_time;
  j["total_time"] = r.total_time;
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

nlohmann::ordered_json to_json(const AggregateRow& a) {
  nlohmann::ordered_json j;
  j["group"] = a.group;
  j["setting"] = a.setting;
  j["runs"] = a.runs;
  j["solved"] = a.solved;
  j["total_time_sgm"] = a.time_sgm;
  j["nodes_sgm"] = a.nodes_sgm;
  j["GI%_mean"] = a.gi_mean;
  j["ΔV%_mean"] = a.delta_v_mean;
  j["ΔC%_mean"] = a.delta_c_mean;
  return j;
}

nlohmann::ordered_json to_json(const RunReport& report) {
  nlohmann::ordered_json j;
  j["records"] = nlohmann::ordered_json::array();
  for (const auto& r : report.records) j["records"].push_back(to_json(r));
  j["aggregate"] = nlohmann::ordered_json::array();
  for (const auto& a : report.aggregates) j["aggregate"].push_back(to_json(a));
  return j;
}

nlohmann::ordered_json to_json(const PresolveReport& r) {
  nlohmann::ordered_json j;
  j["variables_before"] = r.variables_before;
  j["variables_after"] = r.variables_after;
  j["constraints_before"] = r.constraints_before;
  j["constraints_after"] = r.constraints_after;
  j["ΔV%"] = r.delta_v_pct;
  j["ΔC%"] = r.delta_c_pct;
  j["step_seconds"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.step_seconds) j["step_seconds"][k] = v;
  return j;
}

RunRecord record_from_json(const nlohmann::json& j) {
  auto num = [&](const char* key) {
    return j.contains(key) && j[key].is_number() ? j[key].get<double>() : std::nan("");
  };
  RunRecord r;
  r.instance_id = j.value("instance_id", "");
  r.group = j.value("group", "");
  r.setting = j.value("setting", "");
  r.status = j.value("status", "");
  r.z = j.value("z", "");
  r.z_value = r.z.empty() ? std::nan("") : to_double(parse_rational(r.z));
  r.z_lp = num("z_LP");
  r.z_root = num("z_root");
  if (j.contains("LPG%") && j["LPG%"].is_number()) r.lpg_pct = j["LPG%"].get<double>();
  r.gi_pct = num("GI%");
  r.delta_v_pct = num("ΔV%");
  r.delta_c_pct = num("ΔC%");
  r.nodes = j.value("nodes", 0LL);
  r.cuts = j.value("cuts", 0LL);
  r.presolve_time = num("presolve_time");
  r.separation_time = num("separation_time");
  r.total_time = num("total_time");
  r.error = j.value("error", "");
  return r;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string csv_number(double v) {
  if (!std::isfinite(v)) return "";
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << "instance_id,setting,status,z,z_LP,z_root,LPG%,GI%,ΔV%,ΔC%,nodes,cuts,presolve_time,separation_time,"
         "total_time\n";
  for (const auto& r : records) {
    out << csv_field(r.instance_id) << ',' << csv_field(r.setting) << ',' << csv_field(r.status) << ','
        << csv_field(r.z) << ',' << csv_number(r.z_lp) << ',' << csv_number(r.z_root) << ','
        << (r.lpg_pct ? csv_number(*r.lpg_pct) : "") << ',' << csv_number(r.gi_pct) << ','
        << csv_number(r.delta_v_pct) << ',' << csv_number(r.delta_c_pct) << ',' << r.nodes << ',' << r.cuts << ','
        << csv_number(r.presolve_time) << ',' << csv_number(r.separation_time) << ',' << csv_number(r.total_time)
        << '\n';
  }
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  out << "group,setting,runs,solved,total_time_sgm,nodes_sgm,GI%_mean,ΔV%_mean,ΔC%_mean\n";
  for (const auto& a : rows) {
    out << csv_field(a.group) << ',' << csv_field(a.setting) << ',' << a.runs << ',' << a.solved << ','
        << csv_number(a.time_sgm) << ',' << csv_number(a.nodes_sgm) << ',' << csv_number(a.gi_mean) << ','
        << csv_number(a.delta_v_mean) << ',' << csv_number(a.delta_c_mean) << '\n';
  }
}

}  // namespace gmclp
