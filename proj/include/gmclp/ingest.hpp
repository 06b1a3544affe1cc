#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "gmclp/model.hpp"

namespace gmclp {

class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written (as opposed to malformed content).
class IoError : public IngestError {
 public:
  using IngestError::IngestError;
};

/// Portable seeded generator. The engine is std::mt19937_64, whose output
/// sequence is fixed by the C++ standard; range mappings are done here rather
/// than with std:: distributions, which differ between standard libraries.
///   uniform01: (next() >> 11) * 2^-53, a value in [0, 1).
///   uniform_int(lo, hi): rejection sampling on next() against the largest
///   multiple of (hi - lo + 1) representable in 64 bits, then modulo.
class Rng {
 public:
  static constexpr const char* kName = "mt19937_64";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform01();
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

 private:
  std::mt19937_64 engine_;
};

/// Square matrix of pairwise distances; +infinity marks "no path".
class DistanceMatrix {
 public:
  static constexpr double kInfinity = std::numeric_limits<double>::infinity();

  explicit DistanceMatrix(int n = 0);

  int size() const { return n_; }
  double at(int i, int j) const { return d_[index(i, j)]; }
  double& at(int i, int j) { return d_[index(i, j)]; }

  /// All-pairs shortest paths (Floyd-Warshall), in place.
  void close_shortest_paths();

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
  }
  int n_;
  std::vector<double> d_;
};

struct PmedGraph {
  DistanceMatrix distances;
  int vertex_count = 0;
  int p = 0;
};

/// Reads an OR-Library p-median file ("n m p" then m lines "u v cost") and
/// closes the edge weights under shortest paths.
PmedGraph load_pmed(const std::filesystem::path& path);
PmedGraph parse_pmed(std::istream& in, const std::string& source_name = "<stream>");

/// Nearest-rank 1/(2p) percentile of the n(n-1)/2 off-diagonal distances.
double compute_coverage_radius(const DistanceMatrix& d, int p);

/// I_j = { i : d_ij <= R } with every vertex both facility and customer.
std::vector<CoverageSet> coverage_from_distances(const DistanceMatrix& d, double radius);

/// Uniform facility then customer coordinates on [0,30]^2 (facilities drawn
/// first, x before y), Euclidean coverage at radius R. Weights are left 0.
Instance generate_planar(int n_customers, int n_facilities, int p, double radius,
                         std::uint64_t seed);

/// Instance whose facilities and customers are the pmed vertices; weights 0.
Instance instance_from_pmed(const PmedGraph& graph, double radius, int p, const std::string& source);

struct WeightScheme {
  enum class Kind { UnitAlternating, RatioRandom };
  Kind kind = Kind::UnitAlternating;
  double ratio = 0.5;
  std::uint64_t seed = 0;

  static WeightScheme unit() { return {}; }
  static WeightScheme ratio_random(double r, std::uint64_t seed) {
    return {Kind::RatioRandom, r, seed};
  }
  /// "unit" or "ratio:<r>".
  static WeightScheme parse(const std::string& text, std::uint64_t seed);
  std::string describe() const;
};

/// Number of customers receiving a negative weight: round-half-up of r * |J|.
int negative_count(double ratio, int customer_count);

/// unit-alternating: customers 1,3,5,... get +1 and 2,4,6,... get -1.
/// ratio-random: a uniformly chosen set of negative_count(r, |J|) customers
/// (partial Fisher-Yates) draw weights from {-100..-1}, the rest from {1..100},
/// drawn in customer order.
Instance assign_weights(Instance skeleton, const WeightScheme& scheme);

/// Native text format:
///   GMCLP 1
///   |I| |J| p
///   w_j k i_1 ... i_k      (one line per customer, 1-based facility indices)
Instance parse_coverage(std::istream& in, const std::string& source_name = "<stream>");
Instance parse_coverage_file(const std::filesystem::path& path);
void write_coverage(std::ostream& out, const Instance& inst);
void write_coverage_file(const Instance& inst, const std::filesystem::path& path);

}  // namespace gmclp
