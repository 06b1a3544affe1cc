#include "gmclp/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gmclp {

ValidationReport validate_instance(const Instance& inst) {
  ValidationReport report;
  if (inst.facility_count < 1) report.violations.push_back("facility count must be positive");
  if (inst.p < 1) report.violations.push_back("p must be positive");
  if (inst.p > inst.facility_count) report.violations.push_back("p exceeds facility count");
  for (CustomerIndex j = 0; j < inst.customer_count(); ++j) {
    const auto& cov = inst.customers[j].coverage;
    const std::string who = "customer " + std::to_string(j + 1) + ": ";
    for (std::size_t k = 0; k < cov.size(); ++k) {
      if (cov[k] < 0 || cov[k] >= inst.facility_count) {
        report.violations.push_back(who + "coverage index out of range");
        break;
      }
    }
    for (std::size_t k = 1; k < cov.size(); ++k) {
      if (cov[k] == cov[k - 1]) {
        report.violations.push_back(who + "duplicate coverage entries");
        break;
      }
      if (cov[k] < cov[k - 1]) {
        report.violations.push_back(who + "coverage not sorted");
        break;
      }
    }
  }
  return report;
}

FacilityVector FacilityVector::from_open_set(int facility_count,
                                             std::span<const FacilityIndex> open_set) {
  FacilityVector y;
  y.open.assign(static_cast<std::size_t>(facility_count), 0);
  for (const auto i : open_set) {
    if (i < 0 || i >= facility_count) throw ModelError("open facility index out of range");
    y.open[static_cast<std::size_t>(i)] = 1;
  }
  return y;
}

std::vector<FacilityIndex> FacilityVector::open_set() const {
  std::vector<FacilityIndex> out;
  for (std::size_t i = 0; i < open.size(); ++i) {
    if (open[i] != 0) out.push_back(static_cast<FacilityIndex>(i));
  }
  return out;
}

int FacilityVector::open_count() const {
  return static_cast<int>(std::count_if(open.begin(), open.end(), [](auto v) { return v != 0; }));
}

void check_integral_y(const Instance& inst, const FacilityVector& y) {
  if (static_cast<int>(y.open.size()) != inst.facility_count) {
    throw ModelError("facility vector length differs from facility count");
  }
  for (const auto v : y.open) {
    if (v > 1) throw ModelError("facility vector is not 0/1");
  }
  if (y.open_count() != inst.p) throw ModelError("facility vector does not open exactly p facilities");
}

Solution complete_x_from_y(const Instance& inst, const FacilityVector& y) {
  check_integral_y(inst, y);
  Solution sol{y, std::vector<std::uint8_t>(inst.customers.size(), 0), Rational(0)};
  for (std::size_t j = 0; j < inst.customers.size(); ++j) {
    const auto& c = inst.customers[j];
    // max over I_j of y_i; an empty I_j leaves x_j = 0.
    const bool covered = std::any_of(c.coverage.begin(), c.coverage.end(),
                                     [&](FacilityIndex i) { return y.open[i] != 0; });
    sol.x[j] = covered ? 1 : 0;
    if (covered) sol.objective += c.weight;
  }
  return sol;
}

Rational evaluate_integer_objective(const Instance& inst, const FacilityVector& y) {
  check_integral_y(inst, y);
  Rational total(0);
  for (const auto& c : inst.customers) {
    int opened = 0;
    for (const auto i : c.coverage) opened += y.open[i];
    if (opened > 0) total += c.weight;  // min{1, y(I_j)} on integral points
  }
  return total;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double result = 1.0;
  for (int t = 1; t <= k; ++t) {
    result = result * static_cast<double>(n - k + t) / static_cast<double>(t);
    if (!std::isfinite(result)) return HUGE_VAL;
  }
  return std::round(result);
}

Solution brute_force_solve(const Instance& inst, const BruteForceOptions& options) {
  if (!validate_instance(inst).ok()) throw ModelError("brute_force_solve: invalid instance");
  const int n = inst.facility_count;
  const int p = inst.p;
  if (binomial(n, p) > options.enumeration_cap) {
    throw ModelError("brute_force_solve: enumeration exceeds cap");
  }

  std::vector<int> combo(static_cast<std::size_t>(p));
  std::iota(combo.begin(), combo.end(), 0);
  std::vector<std::uint8_t> open(static_cast<std::size_t>(n), 0);

  bool have_best = false;
  Rational best(0);
  std::vector<int> best_combo;
  while (true) {
    std::fill(open.begin(), open.end(), 0);
    for (const auto i : combo) open[static_cast<std::size_t>(i)] = 1;
    Rational value(0);
    for (const auto& c : inst.customers) {
      for (const auto i : c.coverage) {
        if (open[static_cast<std::size_t>(i)] != 0) {
          value += c.weight;
          break;
        }
      }
    }
    // Combinations come out in lexicographic order, so strict improvement keeps
    // the smallest optimal set.
    if (!have_best || value > best) {
      have_best = true;
      best = value;
      best_combo = combo;
    }
    int k = p - 1;
    while (k >= 0 && combo[static_cast<std::size_t>(k)] == n - p + k) --k;
    if (k < 0) break;
    ++combo[static_cast<std::size_t>(k)];
    for (int t = k + 1; t < p; ++t) combo[static_cast<std::size_t>(t)] = combo[static_cast<std::size_t>(t - 1)] + 1;
  }
  return complete_x_from_y(inst, FacilityVector::from_open_set(n, best_combo));
}

}  // namespace gmclp
