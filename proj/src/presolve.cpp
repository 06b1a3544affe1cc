#include "gmclp/presolve.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <set>

#include <boost/dynamic_bitset.hpp>

namespace gmclp {
namespace {

using Bits = boost::dynamic_bitset<std::uint64_t>;

Bits to_bits(const CoverageSet& cov, int facility_count) {
  Bits b(static_cast<std::size_t>(facility_count));
  for (const auto i : cov) b.set(static_cast<std::size_t>(i));
  return b;
}

std::vector<Bits> coverage_bits(const Instance& inst) {
  std::vector<Bits> out;
  out.reserve(inst.customers.size());
  for (const auto& c : inst.customers) out.push_back(to_bits(c.coverage, inst.facility_count));
  return out;
}

CoverageSet from_bits(const Bits& b) {
  CoverageSet out;
  for (auto i = b.find_first(); i != Bits::npos; i = b.find_next(i)) out.push_back(static_cast<FacilityIndex>(i));
  return out;
}

class StepTimer {
 public:
  explicit StepTimer(double& sink) : sink_(sink), start_(std::chrono::steady_clock::now()) {}
  ~StepTimer() {
    sink_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }
  StepTimer(const StepTimer&) = delete;
  StepTimer& operator=(const StepTimer&) = delete;

 private:
  double& sink_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

AggregationMap AggregationMap::identity(const Instance& inst) {
  AggregationMap map;
  for (CustomerIndex j = 0; j < inst.customer_count(); ++j) {
    const auto& w = inst.customers[static_cast<std::size_t>(j)].weight;
    map.representatives.push_back(j);
    map.groups.push_back({j});
    map.merged_weights.push_back(w);
    map.positive_mass.push_back(w < 0 ? Rational(0) : w);
    map.negative_mass.push_back(w < 0 ? w : Rational(0));
    map.group_of.push_back(j);
  }
  return map;
}

std::pair<Instance, AggregationMap> isomorphic_aggregate(const Instance& inst, AggregationMode mode) {
  if (mode == AggregationMode::None) return {inst, AggregationMap::identity(inst)};

  AggregationMap map;
  map.group_of.assign(inst.customers.size(), -1);
  std::map<CoverageSet, int> group_by_key;
  for (CustomerIndex j = 0; j < inst.customer_count(); ++j) {
    const auto& c = inst.customers[static_cast<std::size_t>(j)];
    const bool mergeable = mode == AggregationMode::Full || !c.negative();
    int k = -1;
    if (mergeable) {
      auto [it, inserted] = group_by_key.try_emplace(c.coverage, map.size());
      k = it->second;
      if (!inserted) {
        map.groups[static_cast<std::size_t>(k)].push_back(j);
      }
    }
    if (k < 0 || k == map.size()) {
      k = map.size();
      map.representatives.push_back(j);
      map.groups.push_back({j});
      map.merged_weights.emplace_back(0);
      map.positive_mass.emplace_back(0);
      map.negative_mass.emplace_back(0);
    }
    const auto kk = static_cast<std::size_t>(k);
    map.group_of[static_cast<std::size_t>(j)] = k;
    map.merged_weights[kk] += c.weight;
    (c.negative() ? map.negative_mass[kk] : map.positive_mass[kk]) += c.weight;
  }

  Instance reduced;
  reduced.facility_count = inst.facility_count;
  reduced.p = inst.p;
  reduced.provenance = inst.provenance;
  reduced.customers.reserve(map.groups.size());
  for (int k = 0; k < map.size(); ++k) {
    const auto rep = map.representatives[static_cast<std::size_t>(k)];
    reduced.customers.push_back(
        Customer{map.merged_weights[static_cast<std::size_t>(k)], inst.customers[static_cast<std::size_t>(rep)].coverage});
  }
  return {std::move(reduced), std::move(map)};
}

DominanceSet build_dominance_pairs(const Instance& inst) {
  DominanceSet out;
  const auto bits = coverage_bits(inst);
  const int n = inst.customer_count();
  for (CustomerIndex j = 0; j < n; ++j) {
    const auto& cj = inst.customers[static_cast<std::size_t>(j)];
    for (CustomerIndex r = 0; r < n; ++r) {
      if (r == j) continue;
      const auto& cr = inst.customers[static_cast<std::size_t>(r)];
      if (cj.coverage.size() > cr.coverage.size()) continue;
      if (!bits[static_cast<std::size_t>(j)].is_subset_of(bits[static_cast<std::size_t>(r)])) continue;
      out.all_pairs.push_back({j, r});
      if (!cj.negative() && cr.negative()) out.cross_pairs.push_back({j, r});
    }
  }
  out.removed_constraints.assign(inst.customers.size(), {});
  return out;
}

ConstraintReduction constraint_reduction(const Instance& inst) {
  ConstraintReduction out;
  out.removed_constraints.assign(inst.customers.size(), {});

  std::vector<CustomerIndex> order;
  for (CustomerIndex j = 0; j < inst.customer_count(); ++j) {
    if (inst.customers[static_cast<std::size_t>(j)].negative()) order.push_back(j);
  }
  std::stable_sort(order.begin(), order.end(), [&](CustomerIndex a, CustomerIndex b) {
    return inst.customers[static_cast<std::size_t>(a)].coverage.size() >
           inst.customers[static_cast<std::size_t>(b)].coverage.size();
  });

  std::vector<Bits> bits;
  bits.reserve(order.size());
  for (const auto j : order) bits.push_back(to_bits(inst.customers[static_cast<std::size_t>(j)].coverage, inst.facility_count));

  for (std::size_t a = 0; a < order.size(); ++a) {
    Bits remaining = bits[a];  // I-bar_r
    Bits removed(remaining.size());
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      if (!bits[b].is_subset_of(bits[a])) continue;
      const Bits overlap = bits[b] & remaining;
      if (overlap.count() < 2) continue;
      removed |= overlap;
      remaining -= bits[b];
      out.selected_pairs.push_back({order[b], order[a]});
    }
    out.removed_constraints[static_cast<std::size_t>(order[a])] = from_bits(removed);
  }
  return out;
}

std::vector<DominancePair> transitive_prune(const std::vector<DominancePair>& pairs, int customer_count) {
  std::vector<DominancePair> unique = pairs;
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());

  const auto n = static_cast<std::size_t>(customer_count);
  std::vector<std::vector<CustomerIndex>> succ(n);
  std::vector<int> indegree(n, 0);
  for (const auto& e : unique) {
    if (e.from < 0 || e.to < 0 || e.from >= customer_count || e.to >= customer_count) {
      throw PresolveError("transitive_prune: pair references unknown customer");
    }
    if (e.from == e.to) throw PresolveError("transitive_prune: self loop");
    succ[static_cast<std::size_t>(e.from)].push_back(e.to);
    ++indegree[static_cast<std::size_t>(e.to)];
  }

  // Kahn's algorithm; a leftover node means a cycle.
  std::vector<CustomerIndex> topo;
  topo.reserve(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (indegree[v] == 0) topo.push_back(static_cast<CustomerIndex>(v));
  }
  for (std::size_t head = 0; head < topo.size(); ++head) {
    for (const auto w : succ[static_cast<std::size_t>(topo[head])]) {
      if (--indegree[static_cast<std::size_t>(w)] == 0) topo.push_back(w);
    }
  }
  if (topo.size() != n) {
    throw PresolveError("transitive_prune: dominance pairs contain a cycle (was aggregation skipped?)");
  }

  std::vector<Bits> reach(n);
  std::vector<DominancePair> kept;
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    const auto u = static_cast<std::size_t>(*it);
    if (succ[u].empty()) continue;
    Bits through(n);  // nodes reachable from u by a path of length >= 2
    for (const auto w : succ[u]) {
      if (!reach[static_cast<std::size_t>(w)].empty()) through |= reach[static_cast<std::size_t>(w)];
    }
    reach[u] = through;
    for (const auto w : succ[u]) {
      reach[u].set(static_cast<std::size_t>(w));
      if (!through.test(static_cast<std::size_t>(w))) kept.push_back({static_cast<CustomerIndex>(u), w});
    }
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

std::vector<P1Substitution> apply_P1(const Instance& inst) {
  std::vector<P1Substitution> out;
  for (CustomerIndex j = 0; j < inst.customer_count(); ++j) {
    const auto& c = inst.customers[static_cast<std::size_t>(j)];
    if (!c.negative() && c.coverage.size() == 1) out.push_back({j, c.coverage.front()});
  }
  return out;
}

std::vector<P3Replacement> apply_P3(const Instance& inst, const std::vector<P1Substitution>& p1) {
  const auto n = static_cast<std::size_t>(inst.customer_count());
  std::vector<std::uint8_t> substituted(n, 0);
  for (const auto& s : p1) substituted[static_cast<std::size_t>(s.customer)] = 1;

  const auto bits = coverage_bits(inst);
  std::vector<CustomerIndex> candidates;  // nonnegative, not substituted, nonempty
  for (CustomerIndex j = 0; j < inst.customer_count(); ++j) {
    const auto& c = inst.customers[static_cast<std::size_t>(j)];
    if (!c.negative() && substituted[static_cast<std::size_t>(j)] == 0 && !c.coverage.empty()) candidates.push_back(j);
  }
  std::stable_sort(candidates.begin(), candidates.end(), [&](CustomerIndex a, CustomerIndex b) {
    return inst.customers[static_cast<std::size_t>(a)].coverage.size() >
           inst.customers[static_cast<std::size_t>(b)].coverage.size();
  });

  std::vector<P3Replacement> out;
  for (const auto r : candidates) {
    const auto& cr = inst.customers[static_cast<std::size_t>(r)];
    if (cr.coverage.size() < 2) continue;
    const auto& br = bits[static_cast<std::size_t>(r)];
    Bits used(br.size());
    P3Replacement rep{r, {}, {}};
    for (const auto j : candidates) {
      const auto& bj = bits[static_cast<std::size_t>(j)];
      // Strict subsets only: equal sets would let x_r and x_j bound each other.
      if (j == r || inst.customers[static_cast<std::size_t>(j)].coverage.size() >= cr.coverage.size()) continue;
      if (!bj.is_subset_of(br) || bj.intersects(used)) continue;
      used |= bj;
      rep.family.push_back(j);
    }
    if (rep.family.empty()) continue;
    rep.remaining = from_bits(br - used);
    std::sort(rep.family.begin(), rep.family.end());
    out.push_back(std::move(rep));
  }
  std::sort(out.begin(), out.end(), [](const P3Replacement& a, const P3Replacement& b) { return a.customer < b.customer; });
  return out;
}

PresolveArtifacts PresolveArtifacts::identity(const Instance& inst) {
  PresolveArtifacts a;
  a.aggregation = AggregationMap::identity(inst);
  a.dominance.removed_constraints.assign(inst.customers.size(), {});
  return a;
}

std::vector<FacilityIndex> PresolveArtifacts::p1_facility_by_customer(int customer_count) const {
  std::vector<FacilityIndex> out(static_cast<std::size_t>(customer_count), -1);
  for (const auto& s : p1) out[static_cast<std::size_t>(s.customer)] = s.facility;
  return out;
}

FormulationSize plain_formulation_size(const Instance& inst) {
  FormulationSize size{inst.facility_count + inst.customer_count(), 1};
  for (const auto& c : inst.customers) {
    size.constraints += c.negative() ? static_cast<long long>(c.coverage.size()) : 1;
  }
  return size;
}

FormulationSize reduced_formulation_size(const Instance& reduced, const PresolveArtifacts& artifacts) {
  const auto p1 = artifacts.p1_facility_by_customer(reduced.customer_count());
  FormulationSize size{reduced.facility_count, 1};
  for (std::size_t j = 0; j < reduced.customers.size(); ++j) {
    if (p1[j] >= 0) continue;
    ++size.variables;
    const auto& c = reduced.customers[j];
    if (c.negative()) {
      const auto removed = j < artifacts.dominance.removed_constraints.size()
                               ? artifacts.dominance.removed_constraints[j].size()
                               : 0;
      size.constraints += static_cast<long long>(c.coverage.size() - removed);
    } else {
      size.constraints += 1;
    }
  }
  size.constraints += static_cast<long long>(artifacts.dominance_rows.size());
  return size;
}

PresolveResult presolve_pipeline(const Instance& inst, const PresolveOptions& options) {
  PresolveResult result;
  auto& steps = result.report.step_seconds;

  {
    StepTimer t(steps["aggregation"]);
    auto [reduced, map] = isomorphic_aggregate(inst, options.aggregation);
    result.reduced = std::move(reduced);
    result.artifacts.aggregation = std::move(map);
  }
  const Instance& reduced = result.reduced;
  auto& art = result.artifacts;
  art.dominance.removed_constraints.assign(reduced.customers.size(), {});

  if (options.p1) {
    StepTimer t(steps["p1"]);
    art.p1 = apply_P1(reduced);
  }

  std::vector<DominancePair> rows;
  if (options.dominance) {
    StepTimer t(steps["dominance"]);
    auto built = build_dominance_pairs(reduced);
    art.dominance.all_pairs = std::move(built.all_pairs);
    art.dominance.cross_pairs = std::move(built.cross_pairs);
    rows = art.dominance.cross_pairs;
    art.dominance_rows_static = true;
  }
  if (options.constraint_reduction) {
    StepTimer t(steps["constraint_reduction"]);
    auto cr = constraint_reduction(reduced);
    art.dominance.selected_negative_pairs = std::move(cr.selected_pairs);
    art.dominance.removed_constraints = std::move(cr.removed_constraints);
    rows.insert(rows.end(), art.dominance.selected_negative_pairs.begin(),
                art.dominance.selected_negative_pairs.end());
  }
  if (options.transitive_prune && !rows.empty()) {
    StepTimer t(steps["transitive_prune"]);
    rows = transitive_prune(rows, reduced.customer_count());
  } else {
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  }
  {
    const auto p1 = art.p1_facility_by_customer(reduced.customer_count());
    std::erase_if(rows, [&](const DominancePair& e) { return p1[static_cast<std::size_t>(e.from)] >= 0; });
    art.dominance_rows = std::move(rows);
  }
  if (options.p3) {
    StepTimer t(steps["p3"]);
    art.p3 = apply_P3(reduced, art.p1);
  }

  const auto before = plain_formulation_size(inst);
  const auto after = reduced_formulation_size(reduced, art);
  auto& rep = result.report;
  rep.variables_before = before.variables;
  rep.variables_after = after.variables;
  rep.constraints_before = before.constraints;
  rep.constraints_after = after.constraints;
  auto pct = [](long long b, long long a) {
    if (b <= 0) return 0.0;
    return std::clamp(100.0 * static_cast<double>(b - a) / static_cast<double>(b), 0.0, 100.0);
  };
  rep.delta_v_pct = pct(before.variables, after.variables);
  rep.delta_c_pct = pct(before.constraints, after.constraints);
  return result;
}

}  // namespace gmclp
