#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gmclp/rational.hpp"

namespace gmclp {

/// Facility indices are 0-based in memory; files use 1-based indices.
using FacilityIndex = int;
using CustomerIndex = int;
using CoverageSet = std::vector<FacilityIndex>;

struct Customer {
  Rational weight;
  CoverageSet coverage;  // strictly increasing

  bool negative() const { return weight < 0; }
  friend bool operator==(const Customer&, const Customer&) = default;
};

/// Where an instance came from. Not part of the native file format.
struct Provenance {
  std::optional<std::uint64_t> seed;
  std::string source;
  std::optional<double> radius;
  std::string generator;  // RNG identity, e.g. "mt19937_64"
};

struct Instance {
  int facility_count = 0;
  int p = 0;
  std::vector<Customer> customers;
  Provenance provenance;

  int customer_count() const { return static_cast<int>(customers.size()); }

  /// Equality ignores provenance.
  friend bool operator==(const Instance& a, const Instance& b) {
    return a.facility_count == b.facility_count && a.p == b.p && a.customers == b.customers;
  }
};

/// Raised by operations that receive an inconsistent instance or facility vector.
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate_instance(const Instance& inst);

/// Integral facility vector: `open[i]` is true when facility i is opened.
struct FacilityVector {
  std::vector<std::uint8_t> open;

  static FacilityVector from_open_set(int facility_count, std::span<const FacilityIndex> open_set);
  std::vector<FacilityIndex> open_set() const;
  int open_count() const;
};

struct Solution {
  FacilityVector y;
  std::vector<std::uint8_t> x;
  Rational objective;
};

/// Checks y has one entry per facility and exactly p ones. Throws ModelError otherwise.
void check_integral_y(const Instance& inst, const FacilityVector& y);

/// Completes the customer variables from an integral y: x_j = 1 iff some
/// facility of I_j is open.
Solution complete_x_from_y(const Instance& inst, const FacilityVector& y);

/// Sum over customers of w_j * min{1, y(I_j)}, evaluated independently of
/// complete_x_from_y.
Rational evaluate_integer_objective(const Instance& inst, const FacilityVector& y);

struct BruteForceOptions {
  double enumeration_cap = 1e7;
};

/// Enumerates every p-subset; ties go to the lexicographically smallest open set.
Solution brute_force_solve(const Instance& inst, const BruteForceOptions& options = {});

/// binomial(n, k) as a double (saturates rather than overflowing).
double binomial(int n, int k);

}  // namespace gmclp
