#pragma once

#include <span>
#include <vector>

#include "gmclp/lp_model.hpp"
#include "gmclp/model.hpp"
#include "gmclp/presolve.hpp"
#include "gmclp/simplex.hpp"

namespace gmclp {

/// Throws ModelError unless y lies in [0,1]^|I| and sums to p (within 1e-9).
void check_fractional_y(const Instance& inst, std::span<const double> y);

/// z(y) = sum_{j in N} w_j max_{i in I_j} y_i + sum_{j not in N} w_j min{1, y(I_j)}.
double evaluate_relaxed_objective(const Instance& inst, std::span<const double> y);
/// Exact variant for rational points.
Rational evaluate_relaxed_objective(const Instance& inst, std::span<const Rational> y);

/// z'(y): the same closed form over the aggregated customers. `original` is
/// the instance the map was built from.
double evaluate_aggregated_relaxed_objective(const Instance& original, const AggregationMap& map,
                                             std::span<const double> y);

/// f_k(y) = min{1, y(I_k)} - max_{i in I_k} y_i; 0 for an empty I_k.
double coverage_slack(const Instance& inst, CustomerIndex k, std::span<const double> y);

/// sum_k |cross_mass(k)| * f_k(y) over the aggregated customers.
double aggregation_gap(const Instance& original, const AggregationMap& map, std::span<const double> y);

/// Customer values of an LP point (substituted customers read their y column).
std::vector<double> customer_values(const LpLayout& layout, const std::vector<double>& lp_x);
std::vector<double> facility_values(const LpLayout& layout, const std::vector<double>& lp_x);

/// Moves an optimal point of the LP with rows `cross_pairs` to one where
///   x_j = max{max_{I_j} y, max_{s in P(j)} x_s}  for j in N,
///   x_j = min{1, y(I_j), min_{s in N(j)} x_s}    otherwise.
/// Negative customers are lowered first, then the others raised; the pairs
/// only run from J\N into N so a single pass each way is a fixed point.
std::vector<double> dominance_fixed_point(const Instance& inst, const std::vector<DominancePair>& cross_pairs,
                                          std::span<const double> y, std::vector<double> x);

/// Right-hand side of the dominance improvement bound at (x, y):
///   sum_{j in N} w_j min{0, max_{I_j} y - x_{p_j}}
///   + sum_{j not in N} w_j max{min{1, y(I_j)} - x_{n_j}, 0},
/// with x_{p_j} = 0 when P(j) is empty and x_{n_j} = 1 when N(j) is empty.
double dominance_gap_lower_bound(const Instance& inst, const std::vector<DominancePair>& cross_pairs,
                                 std::span<const double> y, std::span<const double> x);

/// Solution-based overload: requires an optimal LP solution of a relaxation
/// built on `inst` without P1; applies dominance_fixed_point first.
double dominance_gap_lower_bound(const Instance& inst, const std::vector<DominancePair>& cross_pairs,
                                 const LpRelaxation& lp, const LpSolution& sol);

}  // namespace gmclp
