#include "gmclp/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace gmclp {

double Rng::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
  const auto range = static_cast<std::uint64_t>(hi - lo) + 1;
  if (range == 0) return static_cast<std::int64_t>(next());  // full 64-bit range
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              (std::numeric_limits<std::uint64_t>::max() % range);
  std::uint64_t draw = next();
  while (draw >= limit) draw = next();
  return lo + static_cast<std::int64_t>(draw % range);
}

DistanceMatrix::DistanceMatrix(int n)
    : n_(n), d_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), kInfinity) {
  for (int i = 0; i < n; ++i) at(i, i) = 0.0;
}

void DistanceMatrix::close_shortest_paths() {
  for (int k = 0; k < n_; ++k) {
    for (int i = 0; i < n_; ++i) {
      const double dik = at(i, k);
      if (dik == kInfinity) continue;
      double* row_i = &d_[index(i, 0)];
      const double* row_k = &d_[index(k, 0)];
      for (int j = 0; j < n_; ++j) {
        const double via = dik + row_k[j];
        if (via < row_i[j]) row_i[j] = via;
      }
    }
  }
}

namespace {

// Reads the next non-empty line; returns false at EOF.
bool next_line(std::istream& in, std::string& line, int& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") != std::string::npos) return true;
  }
  return false;
}

[[noreturn]] void fail(const std::string& source, int line_no, const std::string& what) {
  throw IngestError(source + ":" + std::to_string(line_no) + ": " + what);
}

template <typename T>
std::vector<T> read_fields(const std::string& line, const std::string& source, int line_no) {
  std::istringstream ss(line);
  std::vector<T> out;
  T v{};
  while (ss >> v) out.push_back(v);
  if (!ss.eof()) fail(source, line_no, "malformed number in '" + line + "'");
  return out;
}

}  // namespace

PmedGraph parse_pmed(std::istream& in, const std::string& source) {
  std::string line;
  int line_no = 0;
  if (!next_line(in, line, line_no)) fail(source, line_no, "missing header");
  const auto header = read_fields<long long>(line, source, line_no);
  if (header.size() != 3 || header[0] < 1 || header[1] < 0 || header[2] < 1) {
    fail(source, line_no, "header must be 'n m p' with positive n and p");
  }
  const int n = static_cast<int>(header[0]);
  const long long m = header[1];

  PmedGraph graph{DistanceMatrix(n), n, static_cast<int>(header[2])};
  for (long long e = 0; e < m; ++e) {
    if (!next_line(in, line, line_no)) fail(source, line_no, "expected " + std::to_string(m) + " edge lines");
    const auto edge = read_fields<long long>(line, source, line_no);
    if (edge.size() != 3) fail(source, line_no, "edge line must be 'u v cost'");
    const auto u = edge[0];
    const auto v = edge[1];
    if (u < 1 || u > n || v < 1 || v > n) fail(source, line_no, "vertex index out of range");
    if (edge[2] <= 0) fail(source, line_no, "nonpositive edge cost");
    const auto cost = static_cast<double>(edge[2]);
    const int a = static_cast<int>(u - 1);
    const int b = static_cast<int>(v - 1);
    if (a == b) continue;
    graph.distances.at(a, b) = std::min(graph.distances.at(a, b), cost);
    graph.distances.at(b, a) = std::min(graph.distances.at(b, a), cost);
  }
  graph.distances.close_shortest_paths();
  return graph;
}

PmedGraph load_pmed(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_pmed(in, path.string());
}

double compute_coverage_radius(const DistanceMatrix& d, int p) {
  const int n = d.size();
  if (n < 2 || p < 1) throw std::invalid_argument("compute_coverage_radius needs n >= 2 and p >= 1");
  std::vector<double> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) pairs.push_back(d.at(i, j));
  }
  std::sort(pairs.begin(), pairs.end());
  const auto count = static_cast<long long>(pairs.size());
  // ceil(M / (2p)) in integer arithmetic, clamped to [1, M].
  long long rank = (count + 2LL * p - 1) / (2LL * p);
  rank = std::clamp(rank, 1LL, count);
  return pairs[static_cast<std::size_t>(rank - 1)];
}

std::vector<CoverageSet> coverage_from_distances(const DistanceMatrix& d, double radius) {
  if (radius < 0) throw std::invalid_argument("coverage radius must be nonnegative");
  std::vector<CoverageSet> cover(static_cast<std::size_t>(d.size()));
  for (int j = 0; j < d.size(); ++j) {
    for (int i = 0; i < d.size(); ++i) {
      if (d.at(i, j) <= radius) cover[static_cast<std::size_t>(j)].push_back(i);
    }
  }
  return cover;
}

Instance generate_planar(int n_customers, int n_facilities, int p, double radius, std::uint64_t seed) {
  if (n_customers < 0 || n_facilities < 1 || p < 1) {
    throw std::invalid_argument("generate_planar: counts must be positive");
  }
  constexpr double kSide = 30.0;
  Rng rng(seed);
  auto draw_points = [&](int count) {
    std::vector<std::pair<double, double>> pts(static_cast<std::size_t>(count));
    for (auto& [x, y] : pts) {
      x = kSide * rng.uniform01();
      y = kSide * rng.uniform01();
    }
    return pts;
  };
  const auto facilities = draw_points(n_facilities);
  const auto customers = draw_points(n_customers);

  Instance inst;
  inst.facility_count = n_facilities;
  inst.p = p;
  inst.customers.resize(static_cast<std::size_t>(n_customers));
  for (std::size_t j = 0; j < customers.size(); ++j) {
    auto& cov = inst.customers[j].coverage;
    for (int i = 0; i < n_facilities; ++i) {
      const auto& f = facilities[static_cast<std::size_t>(i)];
      const double dist = std::hypot(f.first - customers[j].first, f.second - customers[j].second);
      if (dist <= radius) cov.push_back(i);
    }
  }
  inst.provenance.seed = seed;
  inst.provenance.radius = radius;
  inst.provenance.generator = Rng::kName;
  inst.provenance.source = "planar";
  return inst;
}

Instance instance_from_pmed(const PmedGraph& graph, double radius, int p, const std::string& source) {
  Instance inst;
  inst.facility_count = graph.vertex_count;
  inst.p = p;
  for (auto& cov : coverage_from_distances(graph.distances, radius)) {
    inst.customers.push_back(Customer{Rational(0), std::move(cov)});
  }
  inst.provenance.source = source;
  inst.provenance.radius = radius;
  return inst;
}

WeightScheme WeightScheme::parse(const std::string& text, std::uint64_t seed) {
  if (text == "unit") return unit();
  const std::string prefix = "ratio:";
  if (text.rfind(prefix, 0) == 0) {
    const double r = std::stod(text.substr(prefix.size()));
    static constexpr double kAllowed[] = {0.1, 0.3, 0.5, 0.7, 0.9};
    const bool ok = std::any_of(std::begin(kAllowed), std::end(kAllowed),
                                [&](double a) { return std::abs(a - r) < 1e-12; });
    if (!ok) throw std::invalid_argument("ratio must be one of 0.1, 0.3, 0.5, 0.7, 0.9");
    return ratio_random(r, seed);
  }
  throw std::invalid_argument("unknown weight scheme '" + text + "' (expected unit or ratio:<r>)");
}

std::string WeightScheme::describe() const {
  if (kind == Kind::UnitAlternating) return "unit";
  std::ostringstream ss;
  ss << "ratio:" << ratio;
  return ss.str();
}

int negative_count(double ratio, int customer_count) {
  // Ratios are tenths; round-half-up of (tenths * |J|) / 10 done in integers.
  const long long tenths = std::llround(ratio * 10.0);
  return static_cast<int>((2 * tenths * customer_count + 10) / 20);
}

Instance assign_weights(Instance skeleton, const WeightScheme& scheme) {
  auto& customers = skeleton.customers;
  if (scheme.kind == WeightScheme::Kind::UnitAlternating) {
    for (std::size_t j = 0; j < customers.size(); ++j) {
      customers[j].weight = (j % 2 == 0) ? Rational(1) : Rational(-1);  // 1-based odd -> +1
    }
    return skeleton;
  }
  const int count = static_cast<int>(customers.size());
  const int negatives = negative_count(scheme.ratio, count);
  Rng rng(scheme.seed);
  std::vector<int> order(static_cast<std::size_t>(count));
  std::iota(order.begin(), order.end(), 0);
  for (int t = 0; t < negatives; ++t) {
    const auto s = rng.uniform_int(t, count - 1);
    std::swap(order[static_cast<std::size_t>(t)], order[static_cast<std::size_t>(s)]);
  }
  std::vector<std::uint8_t> negative(static_cast<std::size_t>(count), 0);
  for (int t = 0; t < negatives; ++t) negative[static_cast<std::size_t>(order[static_cast<std::size_t>(t)])] = 1;
  for (std::size_t j = 0; j < customers.size(); ++j) {
    customers[j].weight = negative[j] != 0 ? Rational(rng.uniform_int(-100, -1)) : Rational(rng.uniform_int(1, 100));
  }
  return skeleton;
}

Instance parse_coverage(std::istream& in, const std::string& source) {
  std::string line;
  int line_no = 0;
  if (!next_line(in, line, line_no)) fail(source, line_no, "empty file");
  {
    std::istringstream ss(line);
    std::string magic;
    int version = 0;
    std::string extra;
    if (!(ss >> magic >> version) || magic != "GMCLP" || version != 1 || (ss >> extra)) {
      fail(source, line_no, "expected header 'GMCLP 1'");
    }
  }
  if (!next_line(in, line, line_no)) fail(source, line_no, "missing size line");
  const auto sizes = read_fields<long long>(line, source, line_no);
  if (sizes.size() != 3) fail(source, line_no, "size line must be '|I| |J| p'");
  if (sizes[0] < 1 || sizes[1] < 0 || sizes[2] < 1) fail(source, line_no, "sizes must be positive");
  if (sizes[2] > sizes[0]) fail(source, line_no, "p exceeds facility count");

  Instance inst;
  inst.facility_count = static_cast<int>(sizes[0]);
  inst.p = static_cast<int>(sizes[2]);
  inst.provenance.source = source;
  const auto customer_count = sizes[1];
  inst.customers.reserve(static_cast<std::size_t>(customer_count));
  for (long long j = 0; j < customer_count; ++j) {
    if (!next_line(in, line, line_no)) fail(source, line_no, "expected " + std::to_string(customer_count) + " customer lines");
    std::istringstream ss(line);
    std::string weight_text;
    long long k = -1;
    if (!(ss >> weight_text >> k) || k < 0) fail(source, line_no, "customer line must be 'w k i_1 ... i_k'");
    Customer c;
    try {
      c.weight = parse_rational(weight_text);
    } catch (const std::exception& e) {
      fail(source, line_no, e.what());
    }
    for (long long t = 0; t < k; ++t) {
      long long idx = 0;
      if (!(ss >> idx)) fail(source, line_no, "fewer coverage entries than declared");
      if (idx < 1 || idx > inst.facility_count) fail(source, line_no, "coverage index out of range");
      const auto i = static_cast<FacilityIndex>(idx - 1);
      if (!c.coverage.empty() && i <= c.coverage.back()) {
        fail(source, line_no, "coverage entries must be strictly increasing");
      }
      c.coverage.push_back(i);
    }
    std::string extra;
    if (ss >> extra) fail(source, line_no, "more coverage entries than declared");
    inst.customers.push_back(std::move(c));
  }
  if (next_line(in, line, line_no)) fail(source, line_no, "trailing content after customer lines");
  return inst;
}

Instance parse_coverage_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_coverage(in, path.string());
}

void write_coverage(std::ostream& out, const Instance& inst) {
  out << "GMCLP 1\n" << inst.facility_count << ' ' << inst.customer_count() << ' ' << inst.p << '\n';
  for (const auto& c : inst.customers) {
    out << format_rational(c.weight) << ' ' << c.coverage.size();
    for (const auto i : c.coverage) out << ' ' << (i + 1);
    out << '\n';
  }
}

void write_coverage_file(const Instance& inst, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_coverage(out, inst);
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace gmclp
