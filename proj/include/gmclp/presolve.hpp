#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gmclp/model.hpp"

namespace gmclp {

class PresolveError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// ---------------------------------------------------------------------------
// Isomorphic aggregation

enum class AggregationMode {
  None,             // identity
  NonnegativeOnly,  // classic P2: merge isomorphic customers with w_j >= 0 only
  Full,             // merge every group of isomorphic customers, any sign
};

/// Partition of the original customers into groups with identical coverage.
/// Reduced customer k stands for group k; its weight is the group's weight sum.
struct AggregationMap {
  std::vector<CustomerIndex> representatives;        // first member of each group
  std::vector<std::vector<CustomerIndex>> groups;    // J_k, ascending
  std::vector<Rational> merged_weights;              // w'_k = w(J_k)
  std::vector<Rational> positive_mass;               // w(J_k \ N)
  std::vector<Rational> negative_mass;               // w(J_k cap N)
  std::vector<int> group_of;                         // original j -> k

  int size() const { return static_cast<int>(groups.size()); }
  bool negative(int k) const { return merged_weights[static_cast<std::size_t>(k)] < 0; }
  /// w(P_k) for k in N', w(N_k) otherwise.
  Rational cross_mass(int k) const {
    const auto kk = static_cast<std::size_t>(k);
    return negative(k) ? positive_mass[kk] : negative_mass[kk];
  }

  static AggregationMap identity(const Instance& inst);
};

std::pair<Instance, AggregationMap> isomorphic_aggregate(const Instance& inst,
                                                         AggregationMode mode = AggregationMode::Full);

// ---------------------------------------------------------------------------
// Dominance

/// (from, to) encodes the dominance inequality x_from <= x_to.
struct DominancePair {
  CustomerIndex from = 0;
  CustomerIndex to = 0;
  friend auto operator<=>(const DominancePair&, const DominancePair&) = default;
};

struct DominanceSet {
  std::vector<DominancePair> all_pairs;                // A
  std::vector<DominancePair> cross_pairs;              // A+-: from in J\N, to in N
  std::vector<DominancePair> selected_negative_pairs;  // output of the constraint reduction
  std::vector<CoverageSet> removed_constraints;        // per customer r: i with x_r >= y_i deleted
};

/// Fills all_pairs and cross_pairs. Expects an aggregated instance; otherwise
/// customers with equal coverage appear in both directions.
DominanceSet build_dominance_pairs(const Instance& inst);

struct ConstraintReduction {
  std::vector<DominancePair> selected_pairs;
  std::vector<CoverageSet> removed_constraints;  // indexed by customer
};

/// Greedy constraint reduction among negative-weight customers: visit them by
/// descending |I_j| (ties by index); for each r, later j with I_j subset of I_r
/// and at least two of r's remaining x_r >= y_i rows inside I_j adds x_j <= x_r
/// and deletes those rows.
ConstraintReduction constraint_reduction(const Instance& inst);

/// Transitive reduction of the pair DAG. Throws PresolveError on a cycle.
std::vector<DominancePair> transitive_prune(const std::vector<DominancePair>& pairs, int customer_count);

// ---------------------------------------------------------------------------
// Adapted MCLP presolve (P1, P3)

struct P1Substitution {
  CustomerIndex customer = 0;
  FacilityIndex facility = 0;
};

/// x_j == y_i for nonnegative customers with I_j = {i}.
std::vector<P1Substitution> apply_P1(const Instance& inst);

struct P3Replacement {
  CustomerIndex customer = 0;              // r
  std::vector<CustomerIndex> family;       // j_1..j_tau, pairwise disjoint, I_jk strict subset of I_r
  CoverageSet remaining;                   // I_r minus the union of the family
};

/// Replaces y(I_r) >= x_r by sum_k x_jk + y(remaining) >= x_r, choosing the
/// disjoint family greedily by descending |I_j| (ties by index).
std::vector<P3Replacement> apply_P3(const Instance& inst, const std::vector<P1Substitution>& p1);

// ---------------------------------------------------------------------------
// Pipeline

struct PresolveOptions {
  AggregationMode aggregation = AggregationMode::Full;
  bool p1 = true;
  bool dominance = true;              // A+- rows
  bool constraint_reduction = true;   // greedy reduction over N x N
  bool transitive_prune = true;
  bool p3 = true;

  static PresolveOptions all_off() {
    return {AggregationMode::None, false, false, false, false, false};
  }
};

struct PresolveArtifacts {
  AggregationMap aggregation;
  std::vector<P1Substitution> p1;
  DominanceSet dominance;
  /// Dominance rows the LP carries: pruned union of A+- and the reduction
  /// pairs, minus pairs whose source is P1-substituted (those rows are implied
  /// by the covering rows x_r >= y_i).
  std::vector<DominancePair> dominance_rows;
  std::vector<P3Replacement> p3;
  bool dominance_rows_static = false;  // A+- rows present in the LP

  /// Artifacts for "no presolve" on the given instance.
  static PresolveArtifacts identity(const Instance& inst);

  /// p1 substitution per customer (-1 when not substituted).
  std::vector<FacilityIndex> p1_facility_by_customer(int customer_count) const;
};

struct FormulationSize {
  long long variables = 0;
  long long constraints = 0;
};

/// Size of formulation (1) on the instance with no reductions.
FormulationSize plain_formulation_size(const Instance& inst);
/// Size of the disaggregated LP built from a reduced instance and its artifacts.
FormulationSize reduced_formulation_size(const Instance& reduced, const PresolveArtifacts& artifacts);

struct PresolveReport {
  long long variables_before = 0;
  long long variables_after = 0;
  long long constraints_before = 0;
  long long constraints_after = 0;
  double delta_v_pct = 0.0;
  double delta_c_pct = 0.0;
  std::map<std::string, double> step_seconds;
};

struct PresolveResult {
  Instance reduced;
  PresolveArtifacts artifacts;
  PresolveReport report;
};

/// aggregate -> P1 -> dominance pairs -> constraint reduction -> prune -> P3.
PresolveResult presolve_pipeline(const Instance& inst, const PresolveOptions& options = {});

}  // namespace gmclp
