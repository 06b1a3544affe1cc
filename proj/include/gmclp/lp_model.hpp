#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gmclp/model.hpp"
#include "gmclp/presolve.hpp"

namespace gmclp {

enum class RowSense { Equal, GreaterEqual, LessEqual };

struct LpTerm {
  int var = 0;
  double coef = 0.0;
};

struct LpRow {
  std::vector<LpTerm> terms;
  RowSense sense = RowSense::GreaterEqual;
  double rhs = 0.0;
  std::string tag;
  int id = -1;  // assigned by LpModel::add_row, stable under removals
};

enum class VarKind { Facility, Customer };

struct LpVariable {
  VarKind kind = VarKind::Facility;
  int entity = 0;  // facility or (reduced) customer index
  double lower = 0.0;
  double upper = 1.0;
  double objective = 0.0;  // maximized
};

/// Sparse maximization LP over bounded variables.
class LpModel {
 public:
  int add_variable(const LpVariable& v);
  int add_row(LpRow row);
  /// Removes rows by id; unknown ids are ignored.
  void remove_rows(const std::vector<int>& ids);

  int variable_count() const { return static_cast<int>(variables_.size()); }
  int row_count() const { return static_cast<int>(rows_.size()); }
  const std::vector<LpVariable>& variables() const { return variables_; }
  LpVariable& variable(int k) { return variables_[static_cast<std::size_t>(k)]; }
  const LpVariable& variable(int k) const { return variables_[static_cast<std::size_t>(k)]; }
  const std::vector<LpRow>& rows() const { return rows_; }
  const LpRow& row(int k) const { return rows_[static_cast<std::size_t>(k)]; }
  /// Position of a row id, or -1.
  int find_row(int id) const;
  int count_tag(const std::string& tag) const;

  /// Activity a_k . x of row position k.
  double activity(int k, const std::vector<double>& x) const;
  double objective_value(const std::vector<double>& x) const;

  /// CPLEX LP text format, for cross-checking with external solvers.
  void write_lp(std::ostream& out) const;

 private:
  std::vector<LpVariable> variables_;
  std::vector<LpRow> rows_;
  int next_row_id_ = 0;
};

enum class CoverMode { Disaggregated, Aggregated };

struct LpBuildOptions {
  CoverMode covering = CoverMode::Disaggregated;
  bool dominance = true;
  /// Replaces the artifact's dominance rows (theorem checks build A or A+- rows).
  std::optional<std::vector<DominancePair>> dominance_override;
};

/// Column layout of a built relaxation. y_i is column i; x_j is
/// customer_var[j], or -1 when x_j is substituted by y_{p1_facility[j]}.
struct LpLayout {
  int facility_count = 0;
  std::vector<int> customer_var;
  std::vector<FacilityIndex> p1_facility;

  /// Column carrying x_j (the substituted y column under P1).
  int column_of(CustomerIndex j) const {
    const auto jj = static_cast<std::size_t>(j);
    return customer_var[jj] >= 0 ? customer_var[jj] : p1_facility[jj];
  }
};

struct LpRelaxation {
  LpModel model;
  LpLayout layout;
};

/// Relaxation of the covering formulation on `inst` (usually the presolved
/// instance) with the reductions recorded in `artifacts`.
LpRelaxation build_lp_relaxation(const Instance& inst, const PresolveArtifacts& artifacts,
                                 const LpBuildOptions& options = {});

/// Shorthand for the plain formulation with no reductions.
LpRelaxation build_plain_relaxation(const Instance& inst, CoverMode covering = CoverMode::Disaggregated);

/// Appends x_j <= x_r + y(I_j \ I_r), tagged "two-customer". Returns the row id.
int add_two_customer_row(LpRelaxation& lp, const Instance& inst, CustomerIndex j, CustomerIndex r);

}  // namespace gmclp
