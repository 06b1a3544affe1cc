#include "gmclp/lp_model.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <ostream>
#include <unordered_map>

namespace gmclp {

int LpModel::add_variable(const LpVariable& v) {
  if (!(v.lower <= v.upper)) throw ModelError("LpModel: variable bounds out of order");
  variables_.push_back(v);
  return variable_count() - 1;
}

int LpModel::add_row(LpRow row) {
  for (const auto& t : row.terms) {
    if (t.var < 0 || t.var >= variable_count()) throw ModelError("LpModel: row references unknown column");
  }
  row.id = next_row_id_++;
  rows_.push_back(std::move(row));
  return rows_.back().id;
}

void LpModel::remove_rows(const std::vector<int>& ids) {
  if (ids.empty()) return;
  std::vector<int> sorted = ids;
  std::sort(sorted.begin(), sorted.end());
  std::erase_if(rows_, [&](const LpRow& r) { return std::binary_search(sorted.begin(), sorted.end(), r.id); });
}

int LpModel::find_row(int id) const {
  // ids are increasing along rows_
  auto it = std::lower_bound(rows_.begin(), rows_.end(), id, [](const LpRow& r, int v) { return r.id < v; });
  return it != rows_.end() && it->id == id ? static_cast<int>(it - rows_.begin()) : -1;
}

int LpModel::count_tag(const std::string& tag) const {
  return static_cast<int>(std::count_if(rows_.begin(), rows_.end(), [&](const LpRow& r) { return r.tag == tag; }));
}

double LpModel::activity(int k, const std::vector<double>& x) const {
  double s = 0.0;
  for (const auto& t : row(k).terms) s += t.coef * x[static_cast<std::size_t>(t.var)];
  return s;
}

double LpModel::objective_value(const std::vector<double>& x) const {
  double s = 0.0;
  for (std::size_t k = 0; k < variables_.size(); ++k) s += variables_[k].objective * x[k];
  return s;
}

namespace {

std::string column_name(const LpVariable& v) {
  return (v.kind == VarKind::Facility ? "y" : "x") + std::to_string(v.entity + 1);
}

void write_terms(std::ostream& out, const std::vector<LpTerm>& terms, const std::vector<LpVariable>& vars) {
  bool first = true;
  for (const auto& t : terms) {
    if (t.coef == 0.0) continue;
    out << (t.coef < 0 ? " - " : (first ? " " : " + "));
    const double a = std::abs(t.coef);
    if (a != 1.0) out << a << ' ';
    out << column_name(vars[static_cast<std::size_t>(t.var)]);
    first = false;
  }
  if (first) out << " 0 " << column_name(vars.front());
}

}  // namespace

void LpModel::write_lp(std::ostream& out) const {
  out.precision(17);
  out << "\\ GMCLP relaxation\nMaximize\n obj:";
  std::vector<LpTerm> obj;
  for (int k = 0; k < variable_count(); ++k) obj.push_back({k, variable(k).objective});
  write_terms(out, obj, variables_);
  out << "\nSubject To\n";
  for (const auto& r : rows_) {
    out << ' ' << r.tag << '_' << r.id << ':';
    write_terms(out, r.terms, variables_);
    out << (r.sense == RowSense::Equal ? " = " : r.sense == RowSense::GreaterEqual ? " >= " : " <= ") << r.rhs
        << '\n';
  }
  out << "Bounds\n";
  for (const auto& v : variables_) out << ' ' << v.lower << " <= " << column_name(v) << " <= " << v.upper << '\n';
  out << "End\n";
}

LpRelaxation build_lp_relaxation(const Instance& inst, const PresolveArtifacts& artifacts,
                                 const LpBuildOptions& options) {
  const auto nj = static_cast<std::size_t>(inst.customer_count());
  LpRelaxation lp;
  auto& m = lp.model;
  auto& layout = lp.layout;
  layout.facility_count = inst.facility_count;
  layout.p1_facility = artifacts.p1_facility_by_customer(inst.customer_count());
  layout.customer_var.assign(nj, -1);

  for (FacilityIndex i = 0; i < inst.facility_count; ++i) m.add_variable({VarKind::Facility, i, 0.0, 1.0, 0.0});
  for (std::size_t j = 0; j < nj; ++j) {
    const double w = to_double(inst.customers[j].weight);
    if (layout.p1_facility[j] >= 0) {
      m.variable(layout.p1_facility[j]).objective += w;
    } else {
      layout.customer_var[j] = m.add_variable({VarKind::Customer, static_cast<int>(j), 0.0, 1.0, w});
    }
  }

  LpRow card{{}, RowSense::Equal, static_cast<double>(inst.p), "cardinality"};
  for (FacilityIndex i = 0; i < inst.facility_count; ++i) card.terms.push_back({i, 1.0});
  m.add_row(std::move(card));

  std::unordered_map<CustomerIndex, const P3Replacement*> p3_of;
  for (const auto& rep : artifacts.p3) p3_of[rep.customer] = &rep;
  const auto& removed = artifacts.dominance.removed_constraints;

  for (std::size_t j = 0; j < nj; ++j) {
    const int xj = layout.customer_var[j];
    if (xj < 0) continue;
    const auto& c = inst.customers[j];
    if (!c.negative()) {
      LpRow row{{}, RowSense::GreaterEqual, 0.0, "cover-pos"};
      if (auto it = p3_of.find(static_cast<CustomerIndex>(j)); it != p3_of.end()) {
        row.tag = "p3";
        for (const auto k : it->second->family) row.terms.push_back({lp.layout.column_of(k), 1.0});
        for (const auto i : it->second->remaining) row.terms.push_back({i, 1.0});
      } else {
        for (const auto i : c.coverage) row.terms.push_back({i, 1.0});
      }
      row.terms.push_back({xj, -1.0});
      m.add_row(std::move(row));
    } else if (options.covering == CoverMode::Aggregated) {
      if (c.coverage.empty()) continue;
      LpRow row{{}, RowSense::LessEqual, 0.0, "cover-aggregated"};
      for (const auto i : c.coverage) row.terms.push_back({i, 1.0});
      row.terms.push_back({xj, -static_cast<double>(inst.p)});
      m.add_row(std::move(row));
    } else {
      const CoverageSet* skip = j < removed.size() ? &removed[j] : nullptr;
      if (skip != nullptr) {
        for (const auto i : *skip) {
          if (!std::binary_search(c.coverage.begin(), c.coverage.end(), i)) {
            throw ModelError("build_lp_relaxation: removed constraint outside the coverage set");
          }
        }
      }
      for (const auto i : c.coverage) {
        if (skip != nullptr && std::binary_search(skip->begin(), skip->end(), i)) continue;
        m.add_row({{{xj, 1.0}, {i, -1.0}}, RowSense::GreaterEqual, 0.0, "cover-neg"});
      }
    }
  }

  if (options.dominance) {
    const auto& pairs = options.dominance_override ? *options.dominance_override : artifacts.dominance_rows;
    for (const auto& e : pairs) {
      if (e.from < 0 || e.to < 0 || static_cast<std::size_t>(e.from) >= nj || static_cast<std::size_t>(e.to) >= nj) {
        throw ModelError("build_lp_relaxation: dominance pair references unknown customer");
      }
      const int a = layout.column_of(e.from);
      const int b = layout.column_of(e.to);
      if (a == b) continue;
      m.add_row({{{a, 1.0}, {b, -1.0}}, RowSense::LessEqual, 0.0, "dominance"});
    }
  }
  return lp;
}

LpRelaxation build_plain_relaxation(const Instance& inst, CoverMode covering) {
  LpBuildOptions options;
  options.covering = covering;
  options.dominance = false;
  return build_lp_relaxation(inst, PresolveArtifacts::identity(inst), options);
}

int add_two_customer_row(LpRelaxation& lp, const Instance& inst, CustomerIndex j, CustomerIndex r) {
  const auto& ij = inst.customers[static_cast<std::size_t>(j)].coverage;
  const auto& ir = inst.customers[static_cast<std::size_t>(r)].coverage;
  LpRow row{{}, RowSense::LessEqual, 0.0, "two-customer"};
  row.terms.push_back({lp.layout.column_of(j), 1.0});
  row.terms.push_back({lp.layout.column_of(r), -1.0});
  CoverageSet diff;
  std::set_difference(ij.begin(), ij.end(), ir.begin(), ir.end(), std::back_inserter(diff));
  for (const auto i : diff) row.terms.push_back({i, -1.0});
  return lp.model.add_row(std::move(row));
}

}  // namespace gmclp
