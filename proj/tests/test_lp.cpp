#include <gtest/gtest.h>

#include <sstream>

#include "gmclp/bnc.hpp"
#include "gmclp/lp_model.hpp"
#include "gmclp/presolve.hpp"
#include "gmclp/relaxation.hpp"
#include "gmclp/simplex.hpp"
#include "support.hpp"

using namespace gmclp;
using namespace testing_support;

namespace {

LpSolution solve(const LpModel& m) {
  auto s = simplex_solve(m);
  EXPECT_TRUE(s.optimal()) << to_string(s.status);
  return s;
}

void expect_feasible(const LpModel& m, const LpSolution& s, double tol = 1e-7) {
  for (int k = 0; k < m.variable_count(); ++k) {
    EXPECT_GE(s.x[static_cast<std::size_t>(k)], m.variable(k).lower - tol);
    EXPECT_LE(s.x[static_cast<std::size_t>(k)], m.variable(k).upper + tol);
  }
  for (int r = 0; r < m.row_count(); ++r) {
    const double a = m.activity(r, s.x);
    const auto& row = m.row(r);
    if (row.sense != RowSense::LessEqual) EXPECT_GE(a, row.rhs - tol) << row.tag;
    if (row.sense != RowSense::GreaterEqual) EXPECT_LE(a, row.rhs + tol) << row.tag;
  }
}

// A random LP with equality, >= and <= rows over boxed columns.
LpModel random_lp(std::uint64_t seed) {
  Rng rng(seed);
  LpModel m;
  const int n = static_cast<int>(rng.uniform_int(2, 14));
  const int rows = static_cast<int>(rng.uniform_int(1, 12));
  for (int k = 0; k < n; ++k) {
    const double lo = rng.uniform01() < 0.2 ? static_cast<double>(rng.uniform_int(-3, 0)) : 0.0;
    m.add_variable({VarKind::Facility, k, lo, lo + static_cast<double>(rng.uniform_int(1, 4)),
                    static_cast<double>(rng.uniform_int(-5, 5))});
  }
  for (int r = 0; r < rows; ++r) {
    LpRow row;
    for (int k = 0; k < n; ++k) {
      if (rng.uniform01() < 0.5) row.terms.push_back({k, static_cast<double>(rng.uniform_int(-4, 4))});
    }
    const auto s = rng.uniform_int(0, 5);
    row.sense = s == 0 ? RowSense::Equal : (s < 3 ? RowSense::GreaterEqual : RowSense::LessEqual);
    row.rhs = static_cast<double>(rng.uniform_int(-4, 6));
    row.tag = "r";
    m.add_row(std::move(row));
  }
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// model building

TEST(LpModel, RowIdsStableUnderRemoval) {
  LpModel m;
  m.add_variable({});
  for (int k = 0; k < 4; ++k) m.add_row({{{0, 1.0}}, RowSense::LessEqual, 1.0, "t", -1});
  m.remove_rows({1, 3, 99});
  ASSERT_EQ(m.row_count(), 2);
  EXPECT_EQ(m.row(0).id, 0);
  EXPECT_EQ(m.row(1).id, 2);
  EXPECT_EQ(m.find_row(2), 1);
  EXPECT_EQ(m.find_row(1), -1);
  EXPECT_EQ(m.add_row({{{0, 1.0}}, RowSense::LessEqual, 1.0, "t", -1}), 4);
}

TEST(BuildLp, Example41WithDominance) {
  const auto inst = example_4_1();
  auto art = PresolveArtifacts::identity(inst);
  art.dominance_rows = {{0, 1}};
  const auto lp = build_lp_relaxation(inst, art);
  EXPECT_EQ(lp.model.row_count(), 6);
  EXPECT_EQ(lp.model.count_tag("cardinality"), 1);
  EXPECT_EQ(lp.model.count_tag("cover-pos"), 1);
  EXPECT_EQ(lp.model.count_tag("cover-neg"), 3);
  EXPECT_EQ(lp.model.count_tag("dominance"), 1);
  EXPECT_EQ(lp.model.row(0).tag, "cardinality");
  EXPECT_EQ(lp.model.row(5).tag, "dominance");
  EXPECT_EQ(lp.model.variable_count(), 5);
}

TEST(BuildLp, Example21Plain) {
  for (const int n : {4, 10}) {
    const auto lp = build_plain_relaxation(example_2_1(n));
    EXPECT_EQ(lp.model.row_count(), 2 + n);
    EXPECT_EQ(lp.model.count_tag("cover-neg"), n);
    EXPECT_EQ(lp.model.count_tag("cover-pos"), 1);
  }
}

TEST(BuildLp, AggregatedCoverRow) {
  const auto lp = build_plain_relaxation(example_2_1(4), CoverMode::Aggregated);
  EXPECT_EQ(lp.model.count_tag("cover-neg"), 0);
  ASSERT_EQ(lp.model.count_tag("cover-aggregated"), 1);
  const auto& row = lp.model.row(2);
  ASSERT_EQ(row.tag, "cover-aggregated");
  double y_sum = 0.0, x_coef = 0.0;
  for (const auto& t : row.terms) (t.var < 4 ? y_sum : x_coef) += t.coef;
  const double sign = row.sense == RowSense::LessEqual ? 1.0 : -1.0;
  EXPECT_DOUBLE_EQ(sign * y_sum, 4.0);
  EXPECT_DOUBLE_EQ(sign * x_coef, -1.0);  // y(I) - p x_2 <= 0 with p = 1
}

TEST(BuildLp, LpTextExport) {
  const auto lp = build_plain_relaxation(example_5_1());
  std::ostringstream os;
  lp.model.write_lp(os);
  const auto text = os.str();
  EXPECT_NE(text.find("Maximize"), std::string::npos);
  EXPECT_NE(text.find("Subject To"), std::string::npos);
  EXPECT_NE(text.find("Bounds"), std::string::npos);
  EXPECT_NE(text.find("End"), std::string::npos);
}

// ---------------------------------------------------------------------------
// simplex

TEST(Simplex, Example21) {
  for (const int n : {4, 10, 100}) {
    const auto lp = build_plain_relaxation(example_2_1(n));
    const auto s = solve(lp.model);
    EXPECT_NEAR(s.objective, 1.0, 1e-9);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(s.x[static_cast<std::size_t>(i)], 1.0 / n, 1e-9);
  }
}

TEST(Simplex, Example41WithDominanceRow) {
  const auto inst = example_4_1();
  auto art = PresolveArtifacts::identity(inst);
  art.dominance_rows = {{0, 1}};
  const auto lp = build_lp_relaxation(inst, art);
  EXPECT_NEAR(solve(lp.model).objective, 0.0, 1e-9);
  // the paper's point is feasible and optimal
  std::vector<double> pt{1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0 / 3};
  LpSolution fake;
  fake.x = pt;
  expect_feasible(lp.model, fake);
  EXPECT_NEAR(lp.model.objective_value(pt), 0.0, 1e-12);
  EXPECT_NEAR(solve(build_plain_relaxation(inst).model).objective, 0.5, 1e-9);
}

TEST(Simplex, Example51) {
  auto lp = build_plain_relaxation(example_5_1());
  const auto s = solve(lp.model);
  EXPECT_NEAR(s.objective, 0.5, 1e-9);
  add_two_customer_row(lp, example_5_1(), 0, 1);
  const auto warm = simplex_solve(lp.model, &s.basis);
  ASSERT_TRUE(warm.optimal());
  EXPECT_NEAR(warm.objective, 0.0, 1e-9);
  EXPECT_NEAR(solve(lp.model).objective, 0.0, 1e-9);
}

TEST(Simplex, AgreesWithDenseOracleOnRandomLps) {
  int infeasible = 0;
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    const auto m = random_lp(seed);
    const double want = dense_lp_max(m);
    const auto s = simplex_solve(m);
    if (std::isnan(want)) {
      ++infeasible;
      ASSERT_EQ(s.status, LpStatus::Infeasible) << "seed " << seed;
      continue;
    }
    ASSERT_TRUE(s.optimal()) << "seed " << seed << " " << to_string(s.status);
    ASSERT_NEAR(s.objective, want, 1e-6) << "seed " << seed;
    expect_feasible(m, s);
    // duals and reduced costs certify optimality: c - A^T pi = d, with
    // d <= 0 at lower bound, d >= 0 at upper bound
    std::vector<double> d(m.variables().size());
    for (int k = 0; k < m.variable_count(); ++k) d[static_cast<std::size_t>(k)] = m.variable(k).objective;
    double dual_obj = 0.0;
    for (int r = 0; r < m.row_count(); ++r) {
      const double pi = s.duals[static_cast<std::size_t>(r)];
      for (const auto& t : m.row(r).terms) d[static_cast<std::size_t>(t.var)] -= pi * t.coef;
      dual_obj += pi * m.row(r).rhs;
    }
    for (int k = 0; k < m.variable_count(); ++k) {
      const double dk = d[static_cast<std::size_t>(k)];
      ASSERT_NEAR(dk, s.reduced_costs[static_cast<std::size_t>(k)], 1e-6);
      dual_obj += dk > 0 ? dk * m.variable(k).upper : dk * m.variable(k).lower;
    }
    ASSERT_NEAR(dual_obj, s.objective, 1e-6) << "seed " << seed;
  }
  EXPECT_GT(infeasible, 0);
}

TEST(Simplex, WarmStartAfterRowChanges) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto inst = random_instance(seed);
    auto lp = build_plain_relaxation(inst);
    const auto first = solve(lp.model);
    int added = 0;
    for (int j = 0; j < inst.customer_count() && added < 6; ++j) {
      for (int r = 0; r < inst.customer_count() && added < 6; ++r) {
        if (j != r && !inst.customers[static_cast<std::size_t>(j)].negative() && inst.customers[static_cast<std::size_t>(r)].negative()) {
          add_two_customer_row(lp, inst, j, r);
          ++added;
        }
      }
    }
    const auto warm = simplex_solve(lp.model, &first.basis);
    const auto cold = simplex_solve(lp.model);
    ASSERT_TRUE(warm.optimal());
    ASSERT_NEAR(warm.objective, cold.objective, 1e-7) << "seed " << seed;
    ASSERT_LE(warm.objective, first.objective + 1e-7);
    // remove the first cover row too, then warm start again
    lp.model.remove_rows({lp.model.row(1).id});
    const auto again = simplex_solve(lp.model, &warm.basis);
    ASSERT_TRUE(again.optimal());
    ASSERT_NEAR(again.objective, dense_lp_max(lp.model), 1e-6);
  }
}

TEST(Simplex, DeterministicAndIterationLimit) {
  const auto lp = build_plain_relaxation(random_instance(77));
  const auto a = simplex_solve(lp.model);
  const auto b = simplex_solve(lp.model);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.iterations, b.iterations);
  const auto big = build_plain_relaxation(assign_weights(generate_planar(300, 40, 4, 6.0, 1), WeightScheme::unit()));
  SimplexOptions o;
  o.iteration_limit = 3;
  EXPECT_EQ(simplex_solve(big.model, nullptr, o).status, LpStatus::IterationLimit);
}

// ---------------------------------------------------------------------------
// closed-form evaluators

TEST(Evaluators, Examples) {
  const std::vector<double> quarter(4, 0.25);
  EXPECT_NEAR(evaluate_relaxed_objective(example_2_1(4), quarter), 1.0, 1e-12);
  const std::vector<Rational> quarter_q(4, Rational(1, 4));
  EXPECT_EQ(evaluate_relaxed_objective(example_2_1(4), std::span<const Rational>(quarter_q)), Rational(1));
  EXPECT_NEAR(evaluate_relaxed_objective(example_5_1(), std::vector<double>{0, 0, 0, 1}), 0.0, 1e-12);
  EXPECT_NEAR(evaluate_relaxed_objective(example_4_1(), std::vector<double>{0.5, 0.5, 0}), 0.5, 1e-12);
  EXPECT_THROW(evaluate_relaxed_objective(example_4_1(), std::vector<double>{0.5, 0.4, 0}), ModelError);
  EXPECT_THROW(evaluate_relaxed_objective(example_4_1(), std::vector<double>{1.5, -0.5, 0}), ModelError);

  const auto inst = example_2_1(4);
  const auto map = isomorphic_aggregate(inst).second;
  EXPECT_NEAR(evaluate_aggregated_relaxed_objective(inst, map, quarter), 0.25, 1e-12);
  EXPECT_NEAR(coverage_slack(inst, 0, quarter), 0.75, 1e-12);
}

TEST(Evaluators, CoverageSlackProperties) {
  const auto inst = make_instance(3, 1, {{Rational(1), {}}, {Rational(1), {2}}, {Rational(-1), {0, 1, 2}}});
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const auto y = random_fractional_y(rng, 3, 1);
    EXPECT_EQ(coverage_slack(inst, 0, y), 0.0);
    EXPECT_NEAR(coverage_slack(inst, 1, y), 0.0, 1e-15);
    EXPECT_GE(coverage_slack(inst, 2, y), -1e-15);
  }
  EXPECT_NEAR(coverage_slack(inst, 2, std::vector<double>{0, 1, 0}), 0.0, 1e-15);
}

TEST(Evaluators, MatchIndependentClosedFormAndIntegerObjective) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto inst = random_instance(seed);
    Rng rng(seed + 99);
    for (int t = 0; t < 10; ++t) {
      const auto y = random_fractional_y(rng, inst.facility_count, inst.p);
      ASSERT_NEAR(evaluate_relaxed_objective(inst, y), closed_form_z(inst, y), 1e-12);
    }
    for_each_subset(inst.facility_count, inst.p, [&](const std::vector<int>& set) {
      std::vector<double> y(static_cast<std::size_t>(inst.facility_count), 0.0);
      for (const int i : set) y[static_cast<std::size_t>(i)] = 1.0;
      ASSERT_NEAR(evaluate_relaxed_objective(inst, y), to_double(open_set_value(inst, set)), 1e-12);
    });
  }
}

// z(y) - z'(y) equals the weighted coverage slack of the merged groups.
TEST(RelaxationTheorems, AggregationIdentity) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto inst = random_instance(seed);
    const auto [reduced, map] = isomorphic_aggregate(inst);
    Rng rng(seed * 31);
    for (int t = 0; t < 20; ++t) {
      const auto y = random_fractional_y(rng, inst.facility_count, inst.p);
      double rhs = 0.0;
      for (int k = 0; k < reduced.customer_count(); ++k) {
        Rational pos(0), neg(0);
        for (const int j : map.groups[static_cast<std::size_t>(k)]) {
          const auto& w = inst.customers[static_cast<std::size_t>(j)].weight;
          (w < 0 ? neg : pos) += w;
        }
        const bool negative_group = pos + neg < 0;
        const double cross = std::abs(to_double(negative_group ? pos : neg));
        const auto& cov = reduced.customers[static_cast<std::size_t>(k)].coverage;
        const double f = cov.empty() ? 0.0 : std::min(1.0, sum_over(cov, y)) - max_over(cov, y);
        rhs += cross * f;
      }
      const double lhs = closed_form_z(inst, y) - closed_form_z(reduced, y);
      ASSERT_NEAR(lhs, rhs, 1e-9) << "seed " << seed;
      ASSERT_NEAR(aggregation_gap(inst, map, y), rhs, 1e-9);
      ASSERT_NEAR(evaluate_aggregated_relaxed_objective(inst, map, y), closed_form_z(reduced, y), 1e-9);
    }
  }
}

TEST(RelaxationTheorems, SampledPointsNeverExceedLp) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto inst = random_instance(seed);
    const double z_lp = solve(build_plain_relaxation(inst).model).objective;
    Rng rng(seed);
    for (int t = 0; t < 30; ++t) {
      ASSERT_LE(closed_form_z(inst, random_fractional_y(rng, inst.facility_count, inst.p)), z_lp + 1e-9);
    }
  }
}

TEST(RelaxationTheorems, PlainLpMatchesDenseOracle) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto inst = random_instance(seed);
    for (const auto mode : {CoverMode::Disaggregated, CoverMode::Aggregated}) {
      const auto lp = build_plain_relaxation(inst, mode);
      ASSERT_NEAR(solve(lp.model).objective, dense_lp_max(lp.model), 1e-6) << "seed " << seed;
    }
  }
}

// y(I_j) <= p x_j is implied by the x_j >= y_i rows once p >= |I_j|, and it
// implies them when p = 1. In between neither dominates.
TEST(RelaxationTheorems, AggregatedVersusDisaggregated) {
  int wide = 0, single = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    auto inst = random_instance(seed);
    std::size_t widest = 0;
    for (const auto& c : inst.customers) {
      if (c.negative()) widest = std::max(widest, c.coverage.size());
    }
    const double dis = solve(build_plain_relaxation(inst).model).objective;
    const double agg = solve(build_plain_relaxation(inst, CoverMode::Aggregated).model).objective;
    if (static_cast<std::size_t>(inst.p) >= widest) {
      ++wide;
      ASSERT_LE(dis, agg + 1e-6) << "seed " << seed;
    }
    if (inst.p == 1) {
      ++single;
      ASSERT_LE(agg, dis + 1e-6) << "seed " << seed;
    }
  }
  EXPECT_GT(wide, 0);
  EXPECT_GT(single, 0);

  // p = 1, one negative customer over three facilities: the aggregated row is
  // strictly tighter
  const auto inst = make_instance(3, 1, {{Rational(2), {0, 1, 2}}, {Rational(-1), {0, 1, 2}}});
  const double dis = solve(build_plain_relaxation(inst).model).objective;
  const double agg = solve(build_plain_relaxation(inst, CoverMode::Aggregated).model).objective;
  EXPECT_NEAR(dis, 2.0 - 1.0 / 3, 1e-9);
  EXPECT_NEAR(agg, 1.0, 1e-9);
}

// Rows for all of A give the same bound as rows for A+- only.
TEST(RelaxationTheorems, CrossPairsCarryAllDominanceStrength) {
  int with_pairs = 0;
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    const auto inst = isomorphic_aggregate(random_instance(seed)).first;
    const auto d = build_dominance_pairs(inst);
    if (!d.all_pairs.empty()) ++with_pairs;
    const auto art = PresolveArtifacts::identity(inst);
    LpBuildOptions all_rows, cross_rows;
    all_rows.dominance_override = d.all_pairs;
    cross_rows.dominance_override = d.cross_pairs;
    const double a = solve(build_lp_relaxation(inst, art, all_rows).model).objective;
    const double c = solve(build_lp_relaxation(inst, art, cross_rows).model).objective;
    const double plain = solve(build_plain_relaxation(inst).model).objective;
    ASSERT_NEAR(a, c, 1e-6) << "seed " << seed;
    ASSERT_LE(c, plain + 1e-6) << "seed " << seed;
  }
  EXPECT_GE(with_pairs, 50);
}

TEST(DominanceBound, Examples) {
  const auto inst = example_4_1();
  const std::vector<DominancePair> pairs{{0, 1}};
  const std::vector<double> y(3, 1.0 / 3), x(2, 1.0 / 3);
  EXPECT_NEAR(dominance_gap_lower_bound(inst, pairs, y, x), 1.0 / 3, 1e-12);
  EXPECT_NEAR(dominance_gap_lower_bound(inst, {}, y, x), 0.0, 1e-12);
  EXPECT_NEAR(dominance_gap_lower_bound(inst, pairs, std::vector<double>{1, 0, 0}, std::vector<double>{1, 1}), 0.0, 1e-12);

  auto art = PresolveArtifacts::identity(inst);
  art.dominance_rows = pairs;
  const auto lp = build_lp_relaxation(inst, art);
  LpSolution not_optimal;
  EXPECT_THROW(dominance_gap_lower_bound(inst, pairs, lp, not_optimal), std::exception);
}

// The bound from an optimal dominance-LP point never exceeds the actual gain.
TEST(DominanceBound, BoundsTheImprovement) {
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    const auto inst = isomorphic_aggregate(random_instance(seed)).first;
    const auto d = build_dominance_pairs(inst);
    auto art = PresolveArtifacts::identity(inst);
    art.dominance_rows = d.cross_pairs;
    const auto lp = build_lp_relaxation(inst, art);
    const auto s = solve(lp.model);
    const double bound = dominance_gap_lower_bound(inst, d.cross_pairs, lp, s);
    const double plain = solve(build_plain_relaxation(inst).model).objective;
    ASSERT_GE(bound, -1e-9);
    ASSERT_LE(bound, plain - s.objective + 1e-6) << "seed " << seed;
  }
}

TEST(DominanceBound, FixedPointKeepsObjectiveAndRows) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto inst = isomorphic_aggregate(random_instance(seed)).first;
    const auto d = build_dominance_pairs(inst);
    auto art = PresolveArtifacts::identity(inst);
    art.dominance_rows = d.cross_pairs;
    const auto lp = build_lp_relaxation(inst, art);
    const auto s = solve(lp.model);
    const auto y = facility_values(lp.layout, s.x);
    const auto x = dominance_fixed_point(inst, d.cross_pairs, y, customer_values(lp.layout, s.x));
    auto point = s.x;
    for (int j = 0; j < inst.customer_count(); ++j) point[static_cast<std::size_t>(lp.layout.column_of(j))] = x[static_cast<std::size_t>(j)];
    LpSolution moved;
    moved.x = point;
    expect_feasible(lp.model, moved, 1e-6);
    ASSERT_NEAR(lp.model.objective_value(point), s.objective, 1e-6) << "seed " << seed;
  }
}

TEST(RelaxationTheorems, AddedRowsNeverRaiseBound) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto inst = isomorphic_aggregate(random_instance(seed)).first;
    auto lp = build_plain_relaxation(inst);
    double last = solve(lp.model).objective;
    const auto pool = build_candidate_pairs(inst, PresolveArtifacts::identity(inst));
    for (const auto& c : pool.candidates) {
      add_two_customer_row(lp, inst, c.j, c.r);
      const double now = solve(lp.model).objective;
      ASSERT_LE(now, last + 1e-6);
      last = now;
    }
  }
}
