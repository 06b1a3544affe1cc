#include "gmclp/bnc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "gmclp/relaxation.hpp"

namespace gmclp {

CutPool build_candidate_pairs(const Instance& inst, const PresolveArtifacts& artifacts) {
  CutPool pool;
  std::vector<CustomerIndex> pos, neg;
  for (CustomerIndex j = 0; j < inst.customer_count(); ++j) {
    (inst.customers[static_cast<std::size_t>(j)].negative() ? neg : pos).push_back(j);
  }
  for (const auto j : pos) {
    const auto& ij = inst.customers[static_cast<std::size_t>(j)].coverage;
    if (ij.size() < 2) continue;
    for (const auto r : neg) {
      const auto& ir = inst.customers[static_cast<std::size_t>(r)].coverage;
      CutCandidate c{j, r, {}};
      std::set_difference(ij.begin(), ij.end(), ir.begin(), ir.end(), std::back_inserter(c.difference));
      if (ij.size() - c.difference.size() < 2) continue;
      if (c.difference.empty() && artifacts.dominance_rows_static) continue;
      pool.candidates.push_back(std::move(c));
    }
  }
  return pool;
}

std::vector<ViolatedCut> separate_two_customer(const CutPool& pool, std::span<const double> x,
                                               std::span<const double> y) {
  std::vector<ViolatedCut> out;
  for (std::size_t k = 0; k < pool.candidates.size(); ++k) {
    const auto& c = pool.candidates[k];
    double v = x[static_cast<std::size_t>(c.j)] - x[static_cast<std::size_t>(c.r)];
    if (v <= pool.violation_tol) continue;
    for (const auto i : c.difference) v -= y[static_cast<std::size_t>(i)];
    if (v > pool.violation_tol) out.push_back({k, v});
  }
  std::stable_sort(out.begin(), out.end(), [](const ViolatedCut& a, const ViolatedCut& b) {
    return a.violation > b.violation;
  });
  return out;
}

void propagate_P4(Node& node, const Instance& inst) {
  if (node.fixed_x_zero.empty()) return;
  std::vector<FacilityIndex> zero = node.fixed_zero;
  for (const auto r : node.fixed_x_zero) {
    const auto& cov = inst.customers[static_cast<std::size_t>(r)].coverage;
    zero.insert(zero.end(), cov.begin(), cov.end());
  }
  std::sort(zero.begin(), zero.end());
  zero.erase(std::unique(zero.begin(), zero.end()), zero.end());
  node.fixed_zero = std::move(zero);
  for (const auto i : node.fixed_one) {
    if (std::binary_search(node.fixed_zero.begin(), node.fixed_zero.end(), i)) node.infeasible = true;
  }
  if (inst.facility_count - static_cast<int>(node.fixed_zero.size()) < inst.p) node.infeasible = true;
}

Solution primal_round_heuristic(const Instance& inst, std::span<const double> y,
                                std::span<const FacilityIndex> fixed_one, std::span<const FacilityIndex> fixed_zero) {
  const auto n = static_cast<std::size_t>(inst.facility_count);
  std::vector<std::uint8_t> blocked(n, 0), open(n, 0);
  for (const auto i : fixed_zero) blocked[static_cast<std::size_t>(i)] = 1;
  int count = 0;
  for (const auto i : fixed_one) {
    if (count < inst.p && open[static_cast<std::size_t>(i)] == 0) {
      open[static_cast<std::size_t>(i)] = 1;
      ++count;
    }
  }
  std::vector<FacilityIndex> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](FacilityIndex a, FacilityIndex b) {
    return y[static_cast<std::size_t>(a)] > y[static_cast<std::size_t>(b)];
  });
  for (int pass = 0; pass < 2 && count < inst.p; ++pass) {
    for (const auto i : order) {
      if (count >= inst.p) break;
      const auto ii = static_cast<std::size_t>(i);
      if (open[ii] != 0 || (pass == 0 && blocked[ii] != 0)) continue;
      open[ii] = 1;
      ++count;
    }
  }
  return complete_x_from_y(inst, FacilityVector{std::move(open)});
}

FacilityIndex select_branch_variable(std::span<const double> y, double tol) {
  FacilityIndex best = -1;
  double best_dist = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double v = y[i];
    if (v <= tol || v >= 1.0 - tol) continue;
    const double dist = std::abs(v - 0.5);
    if (best < 0 || dist < best_dist - 1e-12) {
      best = static_cast<FacilityIndex>(i);
      best_dist = dist;
    }
  }
  if (best < 0) throw ModelError("select_branch_variable: y is integral");
  return best;
}

const std::vector<std::string>& setting_names() {
  static const std::vector<std::string> names{"baseline", "presolve-only", "full", "no-agg", "no-dr", "no-tci"};
  return names;
}

BncOptions options_for_setting(const std::string& name) {
  BncOptions o;
  if (name == "baseline") {
    o.presolve = PresolveOptions::all_off();
    o.cuts = false;
    o.p4 = false;
  } else if (name == "presolve-only") {
    o.presolve = PresolveOptions{AggregationMode::NonnegativeOnly, true, false, false, false, true};
    o.cuts = false;
  } else if (name == "full") {
  } else if (name == "no-agg") {
    o.presolve.aggregation = AggregationMode::NonnegativeOnly;
  } else if (name == "no-dr") {
    o.presolve.dominance = false;
    o.presolve.constraint_reduction = false;
    o.presolve.transitive_prune = false;
  } else if (name == "no-tci") {
    o.cuts = false;
  } else {
    throw std::invalid_argument("unknown setting '" + name + "'");
  }
  return o;
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::NodeLimit: return "node-limit";
    case SolveStatus::TimeLimit: return "time-limit";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::NumericalFailure: return "numerical-failure";
  }
  return "unknown";
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct NodeOrder {
  bool operator()(const std::shared_ptr<Node>& a, const std::shared_ptr<Node>& b) const {
    if (a->parent_bound != b->parent_bound) return a->parent_bound < b->parent_bound;
    return a->id > b->id;
  }
};

class Search {
 public:
  Search(const Instance& original, const BncOptions& options) : original_(original), opt_(options) {}

  BncResult run() {
    const auto start = Clock::now();
    auto& st = result_.stats;
    {
      const auto t0 = Clock::now();
      pre_ = presolve_pipeline(original_, opt_.presolve);
      st.presolve_seconds = seconds_since(t0);
      st.presolve = pre_.report;
    }
    const Instance& reduced = pre_.reduced;

    if (opt_.compute_plain_lp) {
      auto plain = build_plain_relaxation(original_);
      const auto sol = simplex_solve(plain.model, nullptr, opt_.lp);
      st.lp_iterations += sol.iterations;
      if (sol.optimal()) st.z_lp = sol.objective;
    }

    lp_ = build_lp_relaxation(reduced, pre_.artifacts);
    if (opt_.cuts) {
      pool_ = build_candidate_pairs(reduced, pre_.artifacts);
      pool_.violation_tol = opt_.violation_tol;
    }
    active_row_.assign(pool_.candidates.size(), -1);
    integral_weights_ = std::all_of(reduced.customers.begin(), reduced.customers.end(),
                                    [](const Customer& c) { return is_integral(c.weight); });

    auto root = std::make_shared<Node>();
    root->id = next_id_++;
    push(root);

    SolveStatus status = SolveStatus::Optimal;
    while (!open_empty()) {
      auto node = pop();
      if (prunable(node->parent_bound)) continue;
      // limits only bite while a live node remains
      const bool out_of_time = seconds_since(start) > opt_.time_limit;
      if (out_of_time || (opt_.node_limit >= 0 && st.nodes >= opt_.node_limit)) {
        status = out_of_time ? SolveStatus::TimeLimit : SolveStatus::NodeLimit;
        push(node);
        break;
      }
      if (!process(*node, start)) {
        status = SolveStatus::NumericalFailure;
        break;
      }
    }

    double open_bound = -std::numeric_limits<double>::infinity();
    for (const auto& n : open_nodes()) open_bound = std::max(open_bound, n->parent_bound);
    if (status == SolveStatus::Optimal) {
      st.best_bound = has_incumbent_ ? st.z : -std::numeric_limits<double>::infinity();
      if (!has_incumbent_) status = SolveStatus::Infeasible;
    } else {
      st.best_bound = std::max(open_bound, has_incumbent_ ? st.z : open_bound);
    }
    result_.status = status;
    result_.has_solution = has_incumbent_;
    st.total_seconds = seconds_since(start);
    return std::move(result_);
  }

 private:
  bool prunable(double bound) const {
    if (!has_incumbent_) return false;
    if (integral_weights_) return std::floor(bound + 1e-6) <= result_.stats.z;
    return bound <= result_.stats.z + 1e-9;
  }

  void push(std::shared_ptr<Node> n) {
    if (opt_.selection == NodeSelection::BestBound) heap_.push(std::move(n));
    else stack_.push_back(std::move(n));
  }
  bool open_empty() const { return heap_.empty() && stack_.empty(); }
  std::shared_ptr<Node> pop() {
    if (opt_.selection == NodeSelection::BestBound) {
      auto n = heap_.top();
      heap_.pop();
      return n;
    }
    auto n = stack_.back();
    stack_.pop_back();
    return n;
  }
  std::vector<std::shared_ptr<Node>> open_nodes() const {
    std::vector<std::shared_ptr<Node>> out(stack_.begin(), stack_.end());
    auto copy = heap_;
    while (!copy.empty()) {
      out.push_back(copy.top());
      copy.pop();
    }
    return out;
  }

  void try_incumbent(std::span<const double> y, const Node& node) {
    auto sol = primal_round_heuristic(original_, y, node.fixed_one, node.fixed_zero);
    const double v = to_double(sol.objective);
    if (!has_incumbent_ || sol.objective > result_.solution.objective) {
      result_.solution = std::move(sol);
      result_.stats.z = v;
      has_incumbent_ = true;
    }
  }

  LpSolution solve_lp(const LpBasis* warm) {
    auto sol = simplex_solve(lp_.model, warm, opt_.lp);
    result_.stats.lp_iterations += sol.iterations;
    if (sol.status == LpStatus::NumericalFailure || sol.status == LpStatus::IterationLimit) {
      sol = simplex_solve(lp_.model, nullptr, opt_.lp);
      result_.stats.lp_iterations += sol.iterations;
    }
    return sol;
  }

  void track_activity(const LpSolution& sol) {
    std::vector<int> purge;
    for (std::size_t k = 0; k < active_row_.size(); ++k) {
      if (active_row_[k] < 0) continue;
      const int pos = lp_.model.find_row(active_row_[k]);
      const double slack = -sol.row_activity[static_cast<std::size_t>(pos)];  // rows are a.x <= 0
      if (slack > opt_.purge_slack) {
        if (++idle_[active_row_[k]] >= opt_.purge_after) purge.push_back(static_cast<int>(k));
      } else {
        idle_[active_row_[k]] = 0;
      }
    }
    if (purge.empty()) return;
    std::vector<int> ids;
    for (const auto k : purge) {
      ids.push_back(active_row_[static_cast<std::size_t>(k)]);
      idle_.erase(active_row_[static_cast<std::size_t>(k)]);
      active_row_[static_cast<std::size_t>(k)] = -1;
    }
    lp_.model.remove_rows(ids);
    result_.stats.cuts_purged += static_cast<long long>(ids.size());
  }

  // Returns false on an unrecoverable LP failure.
  bool process(Node& node, Clock::time_point start) {
    auto& st = result_.stats;
    const bool is_root = st.nodes == 0;
    ++st.nodes;
    st.max_depth = std::max(st.max_depth, node.depth);

    for (FacilityIndex i = 0; i < lp_.layout.facility_count; ++i) {
      lp_.model.variable(i).lower = 0.0;
      lp_.model.variable(i).upper = 1.0;
    }
    for (const auto i : node.fixed_one) lp_.model.variable(i).lower = 1.0;
    for (const auto i : node.fixed_zero) lp_.model.variable(i).upper = 0.0;

    auto sol = solve_lp(node.basis.get());
    if (sol.status == LpStatus::Infeasible) return true;
    if (!sol.optimal()) return false;
    if (is_root) st.z_root_precut = sol.objective;

    const int rounds = is_root ? opt_.root_cut_rounds : opt_.node_cut_rounds;
    for (int round = 0; opt_.cuts && round < rounds; ++round) {
      if (prunable(sol.objective) || seconds_since(start) > opt_.time_limit) break;
      const auto t0 = Clock::now();
      const auto x = customer_values(lp_.layout, sol.x);
      const auto y = facility_values(lp_.layout, sol.x);
      const auto violated = separate_two_customer(pool_, x, y);
      int added = 0;
      for (const auto& v : violated) {
        if (added >= opt_.cuts_per_round) break;
        if (active_row_[v.candidate] >= 0) continue;
        const auto& c = pool_.candidates[v.candidate];
        const int id = add_two_customer_row(lp_, pre_.reduced, c.j, c.r);
        active_row_[v.candidate] = id;
        idle_[id] = 0;
        ++added;
      }
      st.separation_seconds += seconds_since(t0);
      if (added == 0) break;
      st.cuts_added += added;
      auto next = solve_lp(&sol.basis);
      if (next.status == LpStatus::Infeasible) return true;
      if (!next.optimal()) return false;
      sol = std::move(next);
    }
    if (is_root) st.z_root = sol.objective;
    track_activity(sol);

    const double bound = sol.objective;
    const auto y = facility_values(lp_.layout, sol.x);
    try_incumbent(y, node);
    if (prunable(bound)) return true;

    FacilityIndex branch = -1;
    try {
      branch = select_branch_variable(y);
    } catch (const ModelError&) {
      // Integral y: the LP value equals the objective of that y, already tried.
      return true;
    }

    Node child_base = node;
    child_base.parent_bound = bound;
    child_base.depth = node.depth + 1;
    child_base.basis = std::make_shared<const LpBasis>(std::move(sol.basis));
    child_base.infeasible = false;

    if (has_incumbent_ && opt_.reduced_cost_fixing) {
      for (FacilityIndex i = 0; i < lp_.layout.facility_count; ++i) {
        const double rc = sol.reduced_costs[static_cast<std::size_t>(i)];
        if (y[static_cast<std::size_t>(i)] <= 1e-9 && rc < 0 && prunable(bound + rc)) {
          child_base.fixed_zero.push_back(i);
        } else if (y[static_cast<std::size_t>(i)] >= 1 - 1e-9 && rc > 0 && prunable(bound - rc)) {
          child_base.fixed_one.push_back(i);
        }
      }
    }
    if (has_incumbent_ && opt_.p4) {
      for (CustomerIndex j = 0; j < pre_.reduced.customer_count(); ++j) {
        const int col = lp_.layout.customer_var[static_cast<std::size_t>(j)];
        if (col < 0 || pre_.reduced.customers[static_cast<std::size_t>(j)].negative()) continue;
        const double rc = sol.reduced_costs[static_cast<std::size_t>(col)];
        if (sol.x[static_cast<std::size_t>(col)] <= 1e-9 && rc < 0 && prunable(bound + rc)) {
          child_base.fixed_x_zero.push_back(j);
        }
      }
      std::sort(child_base.fixed_x_zero.begin(), child_base.fixed_x_zero.end());
      child_base.fixed_x_zero.erase(std::unique(child_base.fixed_x_zero.begin(), child_base.fixed_x_zero.end()),
                                    child_base.fixed_x_zero.end());
    }
    auto normalize = [](std::vector<FacilityIndex>& v) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    normalize(child_base.fixed_zero);
    normalize(child_base.fixed_one);

    auto make_child = [&](bool one) {
      auto c = std::make_shared<Node>(child_base);
      c->id = next_id_++;
      auto& set = one ? c->fixed_one : c->fixed_zero;
      set.insert(std::upper_bound(set.begin(), set.end(), branch), branch);
      propagate_P4(*c, pre_.reduced);
      if (static_cast<int>(c->fixed_one.size()) > original_.p) c->infeasible = true;
      for (const auto i : c->fixed_one) {
        if (std::binary_search(c->fixed_zero.begin(), c->fixed_zero.end(), i)) c->infeasible = true;
      }
      if (original_.facility_count - static_cast<int>(c->fixed_zero.size()) < original_.p) c->infeasible = true;
      if (!c->infeasible) push(std::move(c));
    };
    // Depth-first dives into the y = 1 child first.
    make_child(false);
    make_child(true);
    return true;
  }

  const Instance& original_;
  BncOptions opt_;
  PresolveResult pre_;
  LpRelaxation lp_;
  CutPool pool_;
  std::vector<int> active_row_;   // per candidate: row id or -1
  std::map<int, int> idle_;        // row id -> consecutive slack LPs
  bool integral_weights_ = false;
  bool has_incumbent_ = false;
  long long next_id_ = 0;
  std::priority_queue<std::shared_ptr<Node>, std::vector<std::shared_ptr<Node>>, NodeOrder> heap_;
  std::vector<std::shared_ptr<Node>> stack_;
  BncResult result_;
};

}  // namespace

BncResult solve_bnc(const Instance& inst, const BncOptions& options) {
  const auto report = validate_instance(inst);
  if (!report.ok()) throw ModelError("solve_bnc: invalid instance: " + report.violations.front());
  Search s(inst, options);
  return s.run();
}

}  // namespace gmclp
