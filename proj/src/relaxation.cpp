#include "gmclp/relaxation.hpp"

#include <algorithm>
#include <cmath>

namespace gmclp {
namespace {

template <class T>
T cover_min(const CoverageSet& cov, std::span<const T> y) {
  T s(0);
  for (const auto i : cov) s += y[static_cast<std::size_t>(i)];
  return std::min(T(1), s);
}

template <class T>
T cover_max(const CoverageSet& cov, std::span<const T> y) {
  T m(0);
  for (const auto i : cov) m = std::max(m, y[static_cast<std::size_t>(i)]);
  return m;
}

double cover_sum(const CoverageSet& cov, std::span<const double> y) {
  double s = 0.0;
  for (const auto i : cov) s += y[static_cast<std::size_t>(i)];
  return s;
}

template <class T>
T closed_form(const Customer& c, std::span<const T> y) {
  return c.negative() ? cover_max(c.coverage, y) : cover_min(c.coverage, y);
}

}  // namespace

void check_fractional_y(const Instance& inst, std::span<const double> y) {
  if (static_cast<int>(y.size()) != inst.facility_count) throw ModelError("y length differs from facility count");
  double s = 0.0;
  for (const auto v : y) {
    if (!(v >= -1e-9 && v <= 1.0 + 1e-9)) throw ModelError("y outside [0,1]");
    s += v;
  }
  if (std::abs(s - inst.p) > 1e-9 * std::max(1.0, static_cast<double>(inst.p))) {
    throw ModelError("y does not sum to p");
  }
}

double evaluate_relaxed_objective(const Instance& inst, std::span<const double> y) {
  check_fractional_y(inst, y);
  double z = 0.0;
  for (const auto& c : inst.customers) z += to_double(c.weight) * closed_form(c, y);
  return z;
}

Rational evaluate_relaxed_objective(const Instance& inst, std::span<const Rational> y) {
  if (static_cast<int>(y.size()) != inst.facility_count) throw ModelError("y length differs from facility count");
  Rational s(0);
  for (const auto& v : y) {
    if (v < 0 || v > 1) throw ModelError("y outside [0,1]");
    s += v;
  }
  if (s != Rational(inst.p)) throw ModelError("y does not sum to p");
  Rational z(0);
  for (const auto& c : inst.customers) z += c.weight * closed_form(c, y);
  return z;
}

double evaluate_aggregated_relaxed_objective(const Instance& original, const AggregationMap& map,
                                             std::span<const double> y) {
  check_fractional_y(original, y);
  double z = 0.0;
  for (int k = 0; k < map.size(); ++k) {
    const auto& cov = original.customers[static_cast<std::size_t>(map.representatives[static_cast<std::size_t>(k)])].coverage;
    const double w = to_double(map.merged_weights[static_cast<std::size_t>(k)]);
    z += w * (map.negative(k) ? cover_max(cov, y) : cover_min(cov, y));
  }
  return z;
}

double coverage_slack(const Instance& inst, CustomerIndex k, std::span<const double> y) {
  const auto& cov = inst.customers[static_cast<std::size_t>(k)].coverage;
  if (cov.empty()) return 0.0;
  return cover_min(cov, y) - cover_max(cov, y);
}

double aggregation_gap(const Instance& original, const AggregationMap& map, std::span<const double> y) {
  double g = 0.0;
  for (int k = 0; k < map.size(); ++k) {
    const auto rep = map.representatives[static_cast<std::size_t>(k)];
    g += std::abs(to_double(map.cross_mass(k))) * coverage_slack(original, rep, y);
  }
  return g;
}

std::vector<double> customer_values(const LpLayout& layout, const std::vector<double>& lp_x) {
  std::vector<double> out(layout.customer_var.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = lp_x[static_cast<std::size_t>(layout.column_of(static_cast<CustomerIndex>(j)))];
  }
  return out;
}

std::vector<double> facility_values(const LpLayout& layout, const std::vector<double>& lp_x) {
  return {lp_x.begin(), lp_x.begin() + layout.facility_count};
}

std::vector<double> dominance_fixed_point(const Instance& inst, const std::vector<DominancePair>& cross_pairs,
                                          std::span<const double> y, std::vector<double> x) {
  const auto n = inst.customers.size();
  std::vector<std::vector<CustomerIndex>> pred(n), succ(n);
  for (const auto& e : cross_pairs) {
    const auto& a = inst.customers[static_cast<std::size_t>(e.from)];
    const auto& b = inst.customers[static_cast<std::size_t>(e.to)];
    if (a.negative() || !b.negative()) throw ModelError("dominance_fixed_point: pair is not nonnegative-to-negative");
    succ[static_cast<std::size_t>(e.from)].push_back(e.to);
    pred[static_cast<std::size_t>(e.to)].push_back(e.from);
  }
  for (std::size_t j = 0; j < n; ++j) {
    const auto& c = inst.customers[j];
    if (!c.negative()) continue;
    double v = cover_max(c.coverage, y);
    for (const auto s : pred[j]) v = std::max(v, x[static_cast<std::size_t>(s)]);
    x[j] = v;
  }
  for (std::size_t j = 0; j < n; ++j) {
    const auto& c = inst.customers[j];
    if (c.negative()) continue;
    double v = std::min(1.0, cover_sum(c.coverage, y));
    for (const auto s : succ[j]) v = std::min(v, x[static_cast<std::size_t>(s)]);
    x[j] = v;
  }
  return x;
}

double dominance_gap_lower_bound(const Instance& inst, const std::vector<DominancePair>& cross_pairs,
                                 std::span<const double> y, std::span<const double> x) {
  const auto n = inst.customers.size();
  std::vector<double> xp(n, 0.0);  // x_{p_j}
  std::vector<double> xn(n, 1.0);  // x_{n_j}
  for (const auto& e : cross_pairs) {
    const auto f = static_cast<std::size_t>(e.from);
    const auto t = static_cast<std::size_t>(e.to);
    xp[t] = std::max(xp[t], x[f]);
    xn[f] = std::min(xn[f], x[t]);
  }
  double bound = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const auto& c = inst.customers[j];
    const double w = to_double(c.weight);
    if (c.negative()) {
      bound += w * std::min(0.0, cover_max(c.coverage, y) - xp[j]);
    } else {
      bound += w * std::max(cover_min(c.coverage, y) - xn[j], 0.0);
    }
  }
  return bound;
}

double dominance_gap_lower_bound(const Instance& inst, const std::vector<DominancePair>& cross_pairs,
                                 const LpRelaxation& lp, const LpSolution& sol) {
  if (!sol.optimal()) throw ModelError("dominance_gap_lower_bound: LP solution is not optimal");
  const auto y = facility_values(lp.layout, sol.x);
  auto x = dominance_fixed_point(inst, cross_pairs, y, customer_values(lp.layout, sol.x));
  return dominance_gap_lower_bound(inst, cross_pairs, y, x);
}

}  // namespace gmclp
