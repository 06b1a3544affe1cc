// Command-line front end: generate, solve, presolve, bench, report.

#include <CLI11.hpp>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "gmclp/bnc.hpp"
#include "gmclp/ingest.hpp"
#include "gmclp/lp_model.hpp"
#include "gmclp/presolve.hpp"
#include "gmclp/report.hpp"

namespace fs = std::filesystem;
using namespace gmclp;

namespace {

enum ExitCode { kOk = 0, kLimit = 2, kValidation = 3, kIo = 4 };

struct CliFailure {
  int code;
  std::string message;
};

[[noreturn]] void fail(int code, const std::string& message) { throw CliFailure{code, message}; }

nlohmann::ordered_json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(kIo, "cannot open " + path.string());
  try {
    return nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(kValidation, path.string() + ": " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(kIo, "cannot write " + path.string());
  out << text;
  if (!out) fail(kIo, "write failed for " + path.string());
}

Instance load_instance(const fs::path& path) {
  try {
    auto inst = parse_coverage_file(path);
    const auto report = validate_instance(inst);
    if (!report.ok()) fail(kValidation, path.string() + ": " + report.violations.front());
    return inst;
  } catch (const IoError& e) {
    fail(kIo, e.what());
  } catch (const IngestError& e) {
    fail(kValidation, e.what());
  }
}

BncOptions setting_options(const std::string& setting, double time_limit, long long node_limit) {
  BncOptions o;
  try {
    o = options_for_setting(setting);
  } catch (const std::invalid_argument& e) {
    fail(kValidation, e.what());
  }
  if (time_limit > 0) o.time_limit = time_limit;
  o.node_limit = node_limit;
  return o;
}

std::string solution_text(const Solution& s) {
  std::ostringstream os;
  os << "objective " << format_rational(s.objective) << "\nopen";
  for (const auto i : s.y.open_set()) os << ' ' << (i + 1);
  os << '\n';
  return os.str();
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int default_workers() {
  if (const char* env = std::getenv("GMCLP_WORKERS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
    }
  }
  return 1;
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
  int facilities = 100;
  int customers = 1000;
  int p = 10;
  double radius = -1.0;
  std::string weights = "unit";
  std::uint64_t seed = 1;
  int count = 1;
  std::string out_dir = ".";
  std::string prefix = "inst";
  std::string group;
  std::string pmed;
};

int cmd_generate(const GenerateArgs& a) {
  if (a.p < 1) fail(kValidation, "--p must be positive");
  if (a.count < 0) fail(kValidation, "--count must be nonnegative");
  WeightScheme scheme;
  try {
    scheme = WeightScheme::parse(a.weights, a.seed);
  } catch (const std::invalid_argument& e) {
    fail(kValidation, e.what());
  }
  std::optional<PmedGraph> graph;
  if (!a.pmed.empty()) {
    try {
      graph = load_pmed(a.pmed);
    } catch (const IoError& e) {
      fail(kIo, e.what());
    } catch (const IngestError& e) {
      fail(kValidation, e.what());
    }
    if (a.p > graph->vertex_count) fail(kValidation, "--p exceeds the number of pmed vertices");
  } else {
    if (a.facilities < 1 || a.customers < 1) fail(kValidation, "--facilities and --customers must be positive");
    if (a.p > a.facilities) fail(kValidation, "--p exceeds --facilities");
    if (a.radius < 0) fail(kValidation, "--radius is required for planar instances");
  }

  std::error_code ec;
  fs::create_directories(a.out_dir, ec);
  if (ec) fail(kIo, "cannot create " + a.out_dir);
  nlohmann::ordered_json manifest;
  manifest["instances"] = nlohmann::ordered_json::array();
  const std::string group = a.group.empty() ? scheme.describe() : a.group;
  for (int k = 0; k < a.count; ++k) {
    const std::uint64_t seed = a.seed + static_cast<std::uint64_t>(k);
    WeightScheme ws = scheme;
    ws.seed = seed;
    Instance skeleton;
    double radius = a.radius;
    if (graph) {
      if (radius < 0) radius = compute_coverage_radius(graph->distances, a.p);
      skeleton = instance_from_pmed(*graph, radius, a.p, a.pmed);
    } else {
      skeleton = generate_planar(a.customers, a.facilities, a.p, radius, seed);
    }
    const auto inst = assign_weights(std::move(skeleton), ws);
    const std::string id = a.prefix + "-" + std::to_string(seed);
    const std::string file = id + ".gmclp";
    try {
      write_coverage_file(inst, fs::path(a.out_dir) / file);
    } catch (const IoError& e) {
      fail(kIo, e.what());
    }
    nlohmann::ordered_json entry;
    entry["id"] = id;
    entry["path"] = file;
    entry["group"] = group;
    entry["seed"] = seed;
    entry["weights"] = ws.describe();
    entry["rng"] = Rng::kName;
    entry["facilities"] = inst.facility_count;
    entry["customers"] = inst.customer_count();
    entry["p"] = inst.p;
    entry["radius"] = radius;
    if (graph) entry["pmed"] = a.pmed;
    manifest["instances"].push_back(entry);
    std::cout << (fs::path(a.out_dir) / file).string() << '\n';
  }
  write_text(fs::path(a.out_dir) / "manifest.json", manifest.dump(2) + "\n");
  return kOk;
}

// ---------------------------------------------------------------------------

struct SolveArgs {
  std::string instance;
  std::string setting = "full";
  std::string id;
  double time_limit = 0.0;
  long long node_limit = -1;
  std::string json_out;
  std::string solution_out;
};

int cmd_solve(const SolveArgs& a) {
  const auto inst = load_instance(a.instance);
  const auto options = setting_options(a.setting, a.time_limit, a.node_limit);
  const auto result = solve_bnc(inst, options);
  const std::string id = a.id.empty() ? fs::path(a.instance).stem().string() : a.id;
  const auto record = make_record(id, "", a.setting, result);
  const std::string text = to_json(record).dump(2) + "\n";
  std::cout << text;
  if (!a.json_out.empty()) write_text(a.json_out, text);
  if (!a.solution_out.empty() && result.has_solution) write_text(a.solution_out, solution_text(result.solution));
  switch (result.status) {
    case SolveStatus::Optimal: return kOk;
    case SolveStatus::NodeLimit:
    case SolveStatus::TimeLimit: return kLimit;
    default: return kValidation;
  }
}

// ---------------------------------------------------------------------------

struct PresolveArgs {
  std::string instance;
  std::string setting = "full";
  std::string lp_out;
  std::string json_out;
};

int cmd_presolve(const PresolveArgs& a) {
  const auto inst = load_instance(a.instance);
  const auto options = setting_options(a.setting, 0.0, -1);
  const auto result = presolve_pipeline(inst, options.presolve);
  auto j = to_json(result.report);
  const auto& art = result.artifacts;
  j["customers_after"] = result.reduced.customer_count();
  j["p1_substitutions"] = art.p1.size();
  j["p3_replacements"] = art.p3.size();
  j["dominance_pairs"] = art.dominance.all_pairs.size();
  j["cross_pairs"] = art.dominance.cross_pairs.size();
  j["reduction_pairs"] = art.dominance.selected_negative_pairs.size();
  j["dominance_rows"] = art.dominance_rows.size();
  const std::string text = j.dump(2) + "\n";
  std::cout << text;
  if (!a.json_out.empty()) write_text(a.json_out, text);
  if (!a.lp_out.empty()) {
    const auto lp = build_lp_relaxation(result.reduced, art);
    std::ostringstream os;
    lp.model.write_lp(os);
    write_text(a.lp_out, os.str());
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct BenchArgs {
  std::string manifest;
  std::string settings = "full";
  int workers = 0;
  double time_limit = 0.0;
  long long node_limit = -1;
  std::string json_out;
  std::string csv_out;
  std::string aggregate_csv_out;
};

int cmd_bench(const BenchArgs& a) {
  const auto manifest = read_json_file(a.manifest);
  const fs::path base = fs::path(a.manifest).parent_path();
  const auto settings = split_list(a.settings);
  for (const auto& s : settings) setting_options(s, 0.0, -1);  // reject unknown names up front

  struct Job {
    std::string id, group, path, setting;
  };
  std::vector<Job> jobs;
  if (manifest.contains("instances")) {
    for (const auto& e : manifest["instances"]) {
      const std::string path = e.value("path", "");
      const std::string id = e.value("id", fs::path(path).stem().string());
      for (const auto& s : settings) jobs.push_back({id, e.value("group", ""), (base / path).string(), s});
    }
  }

  std::vector<RunRecord> records(jobs.size());
  std::atomic<std::size_t> next{0};
  const int workers = std::max(1, a.workers > 0 ? a.workers : default_workers());
  auto work = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      const auto& job = jobs[k];
      try {
        const auto inst = load_instance(job.path);
        const auto result = solve_bnc(inst, setting_options(job.setting, a.time_limit, a.node_limit));
        records[k] = make_record(job.id, job.group, job.setting, result);
      } catch (const CliFailure& f) {
        records[k] = RunRecord{job.id, job.group, job.setting, "error"};
        records[k].error = f.message;
      } catch (const std::exception& e) {
        records[k] = RunRecord{job.id, job.group, job.setting, "error"};
        records[k].error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  RunReport report{records, aggregate(records)};
  const std::string text = to_json(report).dump(2) + "\n";
  std::cout << text;
  if (!a.json_out.empty()) write_text(a.json_out, text);
  if (!a.csv_out.empty()) {
    std::ostringstream os;
    write_csv(os, report.records);
    write_text(a.csv_out, os.str());
  }
  if (!a.aggregate_csv_out.empty()) {
    std::ostringstream os;
    write_aggregate_csv(os, report.aggregates);
    write_text(a.aggregate_csv_out, os.str());
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct ReportArgs {
  std::vector<std::string> inputs;
  std::string csv_out;
  std::string aggregate_csv_out;
};

int cmd_report(const ReportArgs& a) {
  std::vector<RunRecord> records;
  for (const auto& path : a.inputs) {
    const auto j = read_json_file(path);
    const auto& list = j.is_array() ? j : (j.contains("records") ? j["records"] : nlohmann::ordered_json::array({j}));
    for (const auto& r : list) records.push_back(record_from_json(r));
  }
  RunReport report{records, aggregate(records)};
  std::cout << to_json(report).dump(2) << '\n';
  if (!a.csv_out.empty()) {
    std::ostringstream os;
    write_csv(os, report.records);
    write_text(a.csv_out, os.str());
  }
  if (!a.aggregate_csv_out.empty()) {
    std::ostringstream os;
    write_aggregate_csv(os, report.aggregates);
    write_text(a.aggregate_csv_out, os.str());
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact solver and benchmark harness for the generalized maximal covering location problem"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write seeded instances and a manifest");
  g->add_option("--facilities", gen.facilities, "Candidate facility count |I|");
  g->add_option("--customers", gen.customers, "Customer count |J|");
  g->add_option("--p", gen.p, "Facilities to open");
  g->add_option("--radius", gen.radius, "Coverage radius R (pmed: defaults to the 1/(2p) percentile)");
  g->add_option("--weights", gen.weights, "unit or ratio:<r>, r in {0.1,0.3,0.5,0.7,0.9}");
  g->add_option("--seed", gen.seed, "Seed of the first instance; later ones use seed+1, ...");
  g->add_option("--count", gen.count, "Number of instances");
  g->add_option("--out-dir,-o", gen.out_dir, "Output directory");
  g->add_option("--prefix", gen.prefix, "File name prefix");
  g->add_option("--group", gen.group, "Group label stored in the manifest");
  g->add_option("--pmed", gen.pmed, "Build from an OR-Library pmed file instead of planar points");

  SolveArgs sol;
  auto* s = app.add_subcommand("solve", "Solve one instance");
  s->add_option("instance", sol.instance, "Instance file")->required();
  s->add_option("--setting", sol.setting, "baseline|presolve-only|full|no-agg|no-dr|no-tci");
  s->add_option("--id", sol.id, "Instance id in the report");
  s->add_option("--time-limit", sol.time_limit, "Seconds (0: none)");
  s->add_option("--node-limit", sol.node_limit, "Nodes (-1: none)");
  s->add_option("--json", sol.json_out, "Also write the record here");
  s->add_option("--solution", sol.solution_out, "Write the open facilities here");

  PresolveArgs pre;
  auto* p = app.add_subcommand("presolve", "Run the reductions and report sizes");
  p->add_option("instance", pre.instance, "Instance file")->required();
  p->add_option("--setting", pre.setting, "Setting whose presolve steps to run");
  p->add_option("--lp-out", pre.lp_out, "Write the reduced relaxation in LP format");
  p->add_option("--json", pre.json_out, "Also write the report here");

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Run settings over a manifest");
  b->add_option("manifest", bench.manifest, "manifest.json from generate")->required();
  b->add_option("--settings", bench.settings, "Comma-separated setting names");
  b->add_option("--workers", bench.workers, "Parallel solves (default: $GMCLP_WORKERS or 1)");
  b->add_option("--time-limit", bench.time_limit, "Seconds per run (0: none)");
  b->add_option("--node-limit", bench.node_limit, "Nodes per run (-1: none)");
  b->add_option("--json", bench.json_out, "Write the report JSON here");
  b->add_option("--csv", bench.csv_out, "Write per-run CSV here");
  b->add_option("--aggregate-csv", bench.aggregate_csv_out, "Write aggregate CSV here");

  ReportArgs rep;
  auto* r = app.add_subcommand("report", "Aggregate saved run records");
  r->add_option("inputs", rep.inputs, "JSON files from solve or bench")->required();
  r->add_option("--csv", rep.csv_out, "Write per-run CSV here");
  r->add_option("--aggregate-csv", rep.aggregate_csv_out, "Write aggregate CSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (g->parsed()) return cmd_generate(gen);
    if (s->parsed()) return cmd_solve(sol);
    if (p->parsed()) return cmd_presolve(pre);
    if (b->parsed()) return cmd_bench(bench);
    if (r->parsed()) return cmd_report(rep);
  } catch (const CliFailure& f) {
    std::cerr << "error: " << f.message << '\n';
    return f.code;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kOk;
}
