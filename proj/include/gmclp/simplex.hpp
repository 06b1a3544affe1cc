#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gmclp/lp_model.hpp"

namespace gmclp {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit, NumericalFailure };

std::string to_string(LpStatus s);

enum class BasisStatus : std::uint8_t { Basic, AtLower, AtUpper, Free };

/// Basis snapshot. Row statuses are keyed by row id so a basis survives row
/// additions and removals; rows missing from the snapshot start basic.
struct LpBasis {
  std::vector<BasisStatus> columns;
  std::vector<int> row_ids;
  std::vector<BasisStatus> rows;

  bool empty() const { return columns.empty(); }
};

struct SimplexOptions {
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-7;
  long long iteration_limit = -1;  // -1: 50 * (rows + columns)
  int refactor_interval = 64;
  int degenerate_threshold = 1000;  // consecutive degenerate pivots before Bland's rule
};

struct LpSolution {
  LpStatus status = LpStatus::NumericalFailure;
  double objective = 0.0;             // maximization sense
  std::vector<double> x;              // one value per model column
  std::vector<double> row_activity;   // a_k . x per row position
  std::vector<double> duals;          // d objective / d rhs, per row position
  std::vector<double> reduced_costs;  // maximization sense, per column
  long long iterations = 0;
  LpBasis basis;

  bool optimal() const { return status == LpStatus::Optimal; }
};

/// Bounded dual simplex (primal simplex cleans up when needed) on a sparse LU
/// of the basis with product-form updates. Every column must have finite bounds.
LpSolution simplex_solve(const LpModel& model, const LpBasis* warm_start = nullptr,
                         const SimplexOptions& options = {});

}  // namespace gmclp
