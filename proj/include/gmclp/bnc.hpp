#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "gmclp/lp_model.hpp"
#include "gmclp/model.hpp"
#include "gmclp/presolve.hpp"
#include "gmclp/simplex.hpp"

namespace gmclp {

// ---------------------------------------------------------------------------
// Two-customer cuts  x_j <= x_r + y(I_j \ I_r)

struct CutCandidate {
  CustomerIndex j = 0;  // nonnegative customer
  CustomerIndex r = 0;  // negative customer
  CoverageSet difference;  // I_j \ I_r
};

struct CutPool {
  std::vector<CutCandidate> candidates;
  double violation_tol = 1e-6;
};

struct ViolatedCut {
  std::size_t candidate = 0;  // index into CutPool::candidates
  double violation = 0.0;
};

/// C = {(j, r) : j in J\N, r in N, |I_j cap I_r| >= 2}, dropping pairs with
/// I_j subset of I_r when the dominance rows are already in the LP.
CutPool build_candidate_pairs(const Instance& inst, const PresolveArtifacts& artifacts);

/// Every candidate violated by more than the pool tolerance at (x, y), sorted
/// by violation descending (ties by candidate index). x is indexed by customer.
std::vector<ViolatedCut> separate_two_customer(const CutPool& pool, std::span<const double> x,
                                               std::span<const double> y);

// ---------------------------------------------------------------------------
// Search pieces

struct Node {
  std::vector<FacilityIndex> fixed_one;   // sorted
  std::vector<FacilityIndex> fixed_zero;  // sorted
  std::vector<CustomerIndex> fixed_x_zero;  // J_0, nonnegative customers with x fixed at 0
  double parent_bound = std::numeric_limits<double>::infinity();
  int depth = 0;
  long long id = 0;
  bool infeasible = false;
  std::shared_ptr<const LpBasis> basis;
};

/// Fixes y_i = 0 for i in I_r, r in J_0; marks the node infeasible when a
/// fixing conflicts with a fixed-one facility or fewer than p facilities stay
/// available.
void propagate_P4(Node& node, const Instance& inst);

/// Opens the fixed-one facilities, then the largest remaining y values (ties
/// by ascending index) skipping fixed-zero ones, and completes x.
Solution primal_round_heuristic(const Instance& inst, std::span<const double> y,
                                std::span<const FacilityIndex> fixed_one = {},
                                std::span<const FacilityIndex> fixed_zero = {});

/// Facility whose value is closest to 1/2, ties by lower index. Throws
/// ModelError when every value is within `tol` of 0 or 1.
FacilityIndex select_branch_variable(std::span<const double> y, double tol = 1e-6);

// ---------------------------------------------------------------------------
// Branch-and-cut

enum class NodeSelection { BestBound, DepthFirst };

struct BncOptions {
  PresolveOptions presolve;
  bool cuts = true;
  int root_cut_rounds = 10;
  int node_cut_rounds = 2;
  int cuts_per_round = 200;
  double violation_tol = 1e-6;
  bool p4 = true;                  // reduced-cost fixing of x feeding P4
  bool reduced_cost_fixing = true; // on y
  NodeSelection selection = NodeSelection::BestBound;
  double time_limit = std::numeric_limits<double>::infinity();  // seconds
  long long node_limit = -1;
  int purge_after = 50;
  double purge_slack = 1e-3;
  bool compute_plain_lp = true;  // z_LP on the unreduced formulation
  SimplexOptions lp;
};

/// Named settings: baseline, presolve-only, full, no-agg, no-dr, no-tci.
BncOptions options_for_setting(const std::string& name);
const std::vector<std::string>& setting_names();

enum class SolveStatus { Optimal, NodeLimit, TimeLimit, Infeasible, NumericalFailure };
std::string to_string(SolveStatus s);

struct SearchStats {
  long long nodes = 0;
  double z_lp = std::numeric_limits<double>::quiet_NaN();    // plain relaxation of the original instance
  double z_root_precut = std::numeric_limits<double>::quiet_NaN();
  double z_root = std::numeric_limits<double>::quiet_NaN();  // after presolve and root cuts
  double z = -std::numeric_limits<double>::infinity();       // incumbent
  double best_bound = std::numeric_limits<double>::infinity();
  long long cuts_added = 0;
  long long cuts_purged = 0;
  long long lp_iterations = 0;
  int max_depth = 0;
  double presolve_seconds = 0.0;
  double separation_seconds = 0.0;
  double total_seconds = 0.0;
  PresolveReport presolve;
};

struct BncResult {
  SolveStatus status = SolveStatus::Infeasible;
  Solution solution;  // on the original instance
  bool has_solution = false;
  SearchStats stats;
};

BncResult solve_bnc(const Instance& inst, const BncOptions& options = {});

}  // namespace gmclp
