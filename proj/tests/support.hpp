// Shared fixtures and independent oracles for the test suites.
// Nothing here calls into the solver code paths it is used to check.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "gmclp/ingest.hpp"
#include "gmclp/lp_model.hpp"
#include "gmclp/model.hpp"

namespace testing_support {

using namespace gmclp;

inline Instance make_instance(int facilities, int p, std::vector<std::pair<Rational, CoverageSet>> customers) {
  Instance inst;
  inst.facility_count = facilities;
  inst.p = p;
  for (auto& [w, cov] : customers) inst.customers.push_back({w, std::move(cov)});
  return inst;
}

inline CoverageSet all_facilities(int n) {
  CoverageSet c(static_cast<std::size_t>(n));
  std::iota(c.begin(), c.end(), 0);
  return c;
}

// Two customers covered by every facility, weights (n+1)/n and -1, p = 1.
inline Instance example_2_1(int n) {
  return make_instance(n, 1, {{Rational(n + 1, n), all_facilities(n)}, {Rational(-1), all_facilities(n)}});
}

// w = (1, -1), I_1 = {1,2}, I_2 = {1,2,3}, p = 1 (0-based below).
inline Instance example_4_1() { return make_instance(3, 1, {{Rational(1), {0, 1}}, {Rational(-1), {0, 1, 2}}}); }

// w = (1, -1, -1), I_1 = {2,3,4}, I_2 = {1,2,3}, I_3 = {1,4}, p = 1.
inline Instance example_5_1() {
  return make_instance(4, 1, {{Rational(1), {1, 2, 3}}, {Rational(-1), {0, 1, 2}}, {Rational(-1), {0, 3}}});
}

enum class Signs { Mixed, NonnegativeOnly, NegativeOnly };

struct RandomSpec {
  int max_facilities = 12;
  int max_customers = 20;
  int max_p = 3;
  int max_abs_weight = 5;
  Signs signs = Signs::Mixed;
};

// Small instance with nested and duplicated coverage sets showing up often.
inline Instance random_instance(std::uint64_t seed, const RandomSpec& spec = {}) {
  Rng rng(seed);
  Instance inst;
  inst.facility_count = static_cast<int>(rng.uniform_int(3, spec.max_facilities));
  inst.p = static_cast<int>(rng.uniform_int(1, std::min(spec.max_p, inst.facility_count)));
  const int customers = static_cast<int>(rng.uniform_int(1, spec.max_customers));
  const double density = 0.15 + 0.45 * rng.uniform01();
  for (int j = 0; j < customers; ++j) {
    Customer c;
    std::int64_t w = 0;
    switch (spec.signs) {
      case Signs::Mixed: w = rng.uniform_int(-spec.max_abs_weight, spec.max_abs_weight); break;
      case Signs::NonnegativeOnly: w = rng.uniform_int(0, spec.max_abs_weight); break;
      case Signs::NegativeOnly: w = rng.uniform_int(-spec.max_abs_weight, -1); break;
    }
    c.weight = Rational(w);
    if (j > 0 && rng.uniform01() < 0.2) {
      // copy or shrink an earlier coverage set
      const auto& src = inst.customers[static_cast<std::size_t>(rng.uniform_int(0, j - 1))].coverage;
      for (const auto i : src) {
        if (rng.uniform01() < 0.7) c.coverage.push_back(i);
      }
    } else {
      for (int i = 0; i < inst.facility_count; ++i) {
        if (rng.uniform01() < density) c.coverage.push_back(i);
      }
    }
    inst.customers.push_back(std::move(c));
  }
  return inst;
}

inline std::vector<int> random_subset(Rng& rng, int n, int k) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  for (int a = 0; a < k; ++a) {
    const auto b = static_cast<std::size_t>(rng.uniform_int(a, n - 1));
    std::swap(idx[static_cast<std::size_t>(a)], idx[b]);
  }
  idx.resize(static_cast<std::size_t>(k));
  return idx;
}

// Convex combination of a few random integral points: always inside Y_L.
inline std::vector<double> random_fractional_y(Rng& rng, int n, int p) {
  std::vector<double> y(static_cast<std::size_t>(n), 0.0);
  const int parts = static_cast<int>(rng.uniform_int(1, 4));
  std::vector<double> lambda(static_cast<std::size_t>(parts));
  double total = 0.0;
  for (auto& l : lambda) total += (l = 0.05 + rng.uniform01());
  for (int k = 0; k < parts; ++k) {
    for (const int i : random_subset(rng, n, p)) y[static_cast<std::size_t>(i)] += lambda[static_cast<std::size_t>(k)] / total;
  }
  return y;
}

// ---------------------------------------------------------------------------
// Closed forms, written out directly from their definitions.

inline double sum_over(const CoverageSet& cov, const std::vector<double>& y) {
  double s = 0.0;
  for (const auto i : cov) s += y[static_cast<std::size_t>(i)];
  return s;
}

inline double max_over(const CoverageSet& cov, const std::vector<double>& y) {
  double m = 0.0;
  for (const auto i : cov) m = std::max(m, y[static_cast<std::size_t>(i)]);
  return m;
}

inline double closed_form_z(const Instance& inst, const std::vector<double>& y) {
  double z = 0.0;
  for (const auto& c : inst.customers) {
    const double w = to_double(c.weight);
    z += w < 0 ? w * max_over(c.coverage, y) : w * std::min(1.0, sum_over(c.coverage, y));
  }
  return z;
}

// Objective of an open set: count each customer once if any facility of I_j is open.
inline Rational open_set_value(const Instance& inst, const std::vector<int>& open) {
  Rational z(0);
  for (const auto& c : inst.customers) {
    const bool covered = std::any_of(c.coverage.begin(), c.coverage.end(), [&](int i) {
      return std::find(open.begin(), open.end(), i) != open.end();
    });
    if (covered) z += c.weight;
  }
  return z;
}

// Calls f(open) for every p-subset in lexicographic order.
template <class F>
void for_each_subset(int n, int p, F&& f) {
  std::vector<int> open(static_cast<std::size_t>(p));
  std::iota(open.begin(), open.end(), 0);
  while (true) {
    f(open);
    int k = p - 1;
    while (k >= 0 && open[static_cast<std::size_t>(k)] == n - p + k) --k;
    if (k < 0) return;
    ++open[static_cast<std::size_t>(k)];
    for (int t = k + 1; t < p; ++t) open[static_cast<std::size_t>(t)] = open[static_cast<std::size_t>(t - 1)] + 1;
  }
}

// ---------------------------------------------------------------------------
// Dense two-phase tableau simplex with Bland's rule. Slow, small LPs only.
// Returns the maximum, or NaN when infeasible.

inline double dense_lp_max(const LpModel& model) {
  constexpr double eps = 1e-10;
  const int n = model.variable_count();
  struct Row {
    std::vector<double> a;
    int sense;  // 0 '=', 1 '>=', -1 '<='
    double b;
  };
  std::vector<Row> rows;
  // shift every column to v' = v - lower >= 0
  for (const auto& r : model.rows()) {
    Row row{std::vector<double>(static_cast<std::size_t>(n), 0.0), 0, r.rhs};
    for (const auto& t : r.terms) {
      row.a[static_cast<std::size_t>(t.var)] += t.coef;
      row.b -= t.coef * model.variable(t.var).lower;
    }
    row.sense = r.sense == RowSense::Equal ? 0 : (r.sense == RowSense::GreaterEqual ? 1 : -1);
    rows.push_back(std::move(row));
  }
  double shift = 0.0;
  for (int k = 0; k < n; ++k) {
    const auto& v = model.variable(k);
    shift += v.objective * v.lower;
    Row up{std::vector<double>(static_cast<std::size_t>(n), 0.0), -1, v.upper - v.lower};
    up.a[static_cast<std::size_t>(k)] = 1.0;
    rows.push_back(up);
  }
  for (auto& r : rows) {
    if (r.b < 0) {
      for (auto& x : r.a) x = -x;
      r.b = -r.b;
      r.sense = -r.sense;
    }
  }
  const int m = static_cast<int>(rows.size());
  int slacks = 0, artificials = 0;
  for (const auto& r : rows) {
    if (r.sense != 0) ++slacks;
    if (r.sense >= 0) ++artificials;
  }
  const int cols = n + slacks + artificials;
  const int art0 = n + slacks;
  std::vector<std::vector<double>> T(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(cols + 1), 0.0));
  std::vector<int> basis(static_cast<std::size_t>(m));
  int s = n, a = art0;
  for (int i = 0; i < m; ++i) {
    auto& t = T[static_cast<std::size_t>(i)];
    const auto& r = rows[static_cast<std::size_t>(i)];
    for (int k = 0; k < n; ++k) t[static_cast<std::size_t>(k)] = r.a[static_cast<std::size_t>(k)];
    t[static_cast<std::size_t>(cols)] = r.b;
    if (r.sense == -1) {
      t[static_cast<std::size_t>(s)] = 1.0;
      basis[static_cast<std::size_t>(i)] = s++;
    } else {
      if (r.sense == 1) t[static_cast<std::size_t>(s++)] = -1.0;
      t[static_cast<std::size_t>(a)] = 1.0;
      basis[static_cast<std::size_t>(i)] = a++;
    }
  }

  auto pivot = [&](int pr, int pc) {
    auto& prow = T[static_cast<std::size_t>(pr)];
    const double pv = prow[static_cast<std::size_t>(pc)];
    for (auto& x : prow) x /= pv;
    for (int i = 0; i < m; ++i) {
      if (i == pr) continue;
      auto& row = T[static_cast<std::size_t>(i)];
      const double f = row[static_cast<std::size_t>(pc)];
      if (f == 0.0) continue;
      for (int k = 0; k <= cols; ++k) row[static_cast<std::size_t>(k)] -= f * prow[static_cast<std::size_t>(k)];
    }
    basis[static_cast<std::size_t>(pr)] = pc;
  };

  auto optimize = [&](const std::vector<double>& c, int allowed_cols) {
    while (true) {
      int enter = -1;
      for (int k = 0; k < allowed_cols && enter < 0; ++k) {
        double d = c[static_cast<std::size_t>(k)];
        for (int i = 0; i < m; ++i) {
          d -= c[static_cast<std::size_t>(basis[static_cast<std::size_t>(i)])] * T[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
        }
        if (d > 1e-9) enter = k;
      }
      if (enter < 0) return;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        const double aik = T[static_cast<std::size_t>(i)][static_cast<std::size_t>(enter)];
        if (aik <= eps) continue;
        const double ratio = T[static_cast<std::size_t>(i)][static_cast<std::size_t>(cols)] / aik;
        if (ratio < best - 1e-12 ||
            (std::abs(ratio - best) <= 1e-12 && basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return;  // unbounded cannot happen with boxed columns
      pivot(leave, enter);
    }
  };

  std::vector<double> c1(static_cast<std::size_t>(cols), 0.0);
  for (int k = art0; k < cols; ++k) c1[static_cast<std::size_t>(k)] = -1.0;
  optimize(c1, cols);
  double infeas = 0.0;
  for (int i = 0; i < m; ++i) {
    if (basis[static_cast<std::size_t>(i)] >= art0) infeas += T[static_cast<std::size_t>(i)][static_cast<std::size_t>(cols)];
  }
  if (infeas > 1e-7) return std::numeric_limits<double>::quiet_NaN();
  for (int i = 0; i < m; ++i) {
    if (basis[static_cast<std::size_t>(i)] < art0) continue;
    for (int k = 0; k < art0; ++k) {
      if (std::abs(T[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]) > 1e-9) {
        pivot(i, k);
        break;
      }
    }
  }
  std::vector<double> c2(static_cast<std::size_t>(cols), 0.0);
  for (int k = 0; k < n; ++k) c2[static_cast<std::size_t>(k)] = model.variable(k).objective;
  optimize(c2, art0);
  double z = shift;
  for (int i = 0; i < m; ++i) {
    const int b = basis[static_cast<std::size_t>(i)];
    if (b < n) z += c2[static_cast<std::size_t>(b)] * T[static_cast<std::size_t>(i)][static_cast<std::size_t>(cols)];
  }
  return z;
}

}  // namespace testing_support
