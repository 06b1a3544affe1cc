#include "gmclp/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace gmclp {

std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration-limit";
    case LpStatus::NumericalFailure: return "numerical-failure";
  }
  return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using SpMat = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

// Internal form: minimize c'x subject to A x - s = 0, l <= (x, s) <= u.
// Columns 0..n-1 are structural, n..n+m-1 are the row logicals s.
class Simplex {
 public:
  Simplex(const LpModel& model, const SimplexOptions& options) : model_(model), opt_(options) {
    n_ = model.variable_count();
    m_ = model.row_count();
    const auto total = static_cast<std::size_t>(n_ + m_);
    lo_.resize(total);
    up_.resize(total);
    cost_.assign(total, 0.0);
    for (int j = 0; j < n_; ++j) {
      const auto& v = model.variable(j);
      if (!std::isfinite(v.lower) || !std::isfinite(v.upper)) {
        throw ModelError("simplex_solve: columns need finite bounds");
      }
      lo_[j] = v.lower;
      up_[j] = v.upper;
      cost_[j] = -v.objective;
    }
    // Column-major copy of A; duplicate entries in a row are summed.
    std::vector<std::vector<std::pair<int, double>>> cols(static_cast<std::size_t>(n_));
    for (int k = 0; k < m_; ++k) {
      const auto& row = model.row(k);
      for (const auto& t : row.terms) cols[static_cast<std::size_t>(t.var)].emplace_back(k, t.coef);
      const auto s = static_cast<std::size_t>(n_ + k);
      switch (row.sense) {
        case RowSense::Equal: lo_[s] = up_[s] = row.rhs; break;
        case RowSense::GreaterEqual: lo_[s] = row.rhs; up_[s] = kInf; break;
        case RowSense::LessEqual: lo_[s] = -kInf; up_[s] = row.rhs; break;
      }
    }
    col_start_.push_back(0);
    for (auto& c : cols) {
      std::stable_sort(c.begin(), c.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      for (std::size_t t = 0; t < c.size(); ++t) {
        if (!col_row_.empty() && col_row_.size() > static_cast<std::size_t>(col_start_.back()) &&
            col_row_.back() == c[t].first) {
          col_val_.back() += c[t].second;
        } else {
          col_row_.push_back(c[t].first);
          col_val_.push_back(c[t].second);
        }
      }
      col_start_.push_back(static_cast<int>(col_row_.size()));
    }
    limit_ = opt_.iteration_limit >= 0 ? opt_.iteration_limit : 50LL * (n_ + m_);
    if (limit_ < 100) limit_ = 100;
  }

  LpSolution run(const LpBasis* warm) {
    status_.assign(static_cast<std::size_t>(n_ + m_), BasisStatus::AtLower);
    if (warm != nullptr && !warm->empty() && static_cast<int>(warm->columns.size()) == n_) {
      import_basis(*warm);
    } else {
      slack_basis();
    }
    if (!refactor()) {
      slack_basis();
      if (!refactor()) return finish(LpStatus::NumericalFailure);
    }
    recompute();

    for (int phase = 0; phase < 64; ++phase) {
      flip_boxed();
      compute_primal();
      const bool df = dual_feasible();
      const bool pf = primal_feasible();
      if (df && pf) return finish(LpStatus::Optimal);
      LpStatus st = LpStatus::Optimal;
      if (df) {
        st = dual_loop();
      } else if (pf) {
        st = primal_loop();
      } else {
        slack_basis();
        dse_.assign(static_cast<std::size_t>(m_), 1.0);
      }
      if (st == LpStatus::Infeasible || st == LpStatus::Unbounded || st == LpStatus::IterationLimit ||
          st == LpStatus::NumericalFailure) {
        return finish(st);
      }
      if (!refactor()) {
        if (++fallbacks_ > 3) return finish(LpStatus::NumericalFailure);
        slack_basis();
        if (!refactor()) return finish(LpStatus::NumericalFailure);
      }
      recompute();
    }
    return finish(LpStatus::NumericalFailure);
  }

 private:
  struct Eta {
    int r = 0;
    double pivot = 1.0;
    std::vector<int> idx;
    std::vector<double> val;
  };

  bool is_logical(int j) const { return j >= n_; }
  bool boxed(int j) const { return std::isfinite(lo_[j]) && std::isfinite(up_[j]); }
  bool fixed(int j) const { return lo_[j] == up_[j]; }

  double nonbasic_value(int j) const {
    switch (status_[j]) {
      case BasisStatus::AtLower: return lo_[j];
      case BasisStatus::AtUpper: return up_[j];
      default: return 0.0;
    }
  }

  void normalize_status(int j) {
    auto& s = status_[j];
    if (s == BasisStatus::Basic) return;
    const bool fl = std::isfinite(lo_[j]);
    const bool fu = std::isfinite(up_[j]);
    if (!fl && !fu) s = BasisStatus::Free;
    else if (s == BasisStatus::AtLower && !fl) s = BasisStatus::AtUpper;
    else if (s == BasisStatus::AtUpper && !fu) s = BasisStatus::AtLower;
    else if (s == BasisStatus::Free) s = fl ? BasisStatus::AtLower : BasisStatus::AtUpper;
    if (fixed(j)) s = BasisStatus::AtLower;
  }

  void slack_basis() {
    for (int j = 0; j < n_; ++j) status_[j] = cost_[j] < 0 ? BasisStatus::AtUpper : BasisStatus::AtLower;
    for (int k = 0; k < m_; ++k) status_[n_ + k] = BasisStatus::Basic;
    rebuild_head();
    dse_.assign(static_cast<std::size_t>(m_), 1.0);
  }

  void import_basis(const LpBasis& b) {
    for (int j = 0; j < n_; ++j) status_[j] = b.columns[static_cast<std::size_t>(j)];
    std::unordered_map<int, BasisStatus> by_id;
    for (std::size_t t = 0; t < b.row_ids.size() && t < b.rows.size(); ++t) by_id[b.row_ids[t]] = b.rows[t];
    for (int k = 0; k < m_; ++k) {
      auto it = by_id.find(model_.row(k).id);
      status_[n_ + k] = it == by_id.end() ? BasisStatus::Basic : it->second;
    }
    for (int j = 0; j < n_ + m_; ++j) normalize_status(j);
    int basic = 0;
    for (const auto s : status_) basic += s == BasisStatus::Basic ? 1 : 0;
    for (int j = n_ - 1; j >= 0 && basic > m_; --j) {
      if (status_[j] == BasisStatus::Basic) {
        status_[j] = BasisStatus::AtLower;
        normalize_status(j);
        --basic;
      }
    }
    for (int k = 0; k < m_ && basic < m_; ++k) {
      if (status_[n_ + k] != BasisStatus::Basic) {
        status_[n_ + k] = BasisStatus::Basic;
        ++basic;
      }
    }
    for (int k = m_ - 1; k >= 0 && basic > m_; --k) {
      if (status_[n_ + k] == BasisStatus::Basic) {
        status_[n_ + k] = BasisStatus::AtLower;
        normalize_status(n_ + k);
        --basic;
      }
    }
    rebuild_head();
    dse_.assign(static_cast<std::size_t>(m_), 1.0);
  }

  void rebuild_head() {
    head_.clear();
    where_.assign(static_cast<std::size_t>(n_ + m_), -1);
    for (int j = 0; j < n_ + m_; ++j) {
      if (status_[j] == BasisStatus::Basic) {
        where_[j] = static_cast<int>(head_.size());
        head_.push_back(j);
      }
    }
  }

  template <class F>
  void for_column(int j, F&& f) const {
    if (is_logical(j)) {
      f(j - n_, -1.0);
      return;
    }
    for (int t = col_start_[j]; t < col_start_[j + 1]; ++t) f(col_row_[t], col_val_[t]);
  }

  bool refactor() {
    etas_.clear();
    if (static_cast<int>(head_.size()) != m_) return false;
    if (m_ == 0) return true;
    std::vector<Eigen::Triplet<double, int>> trip;
    trip.reserve(static_cast<std::size_t>(m_) * 3);
    for (int k = 0; k < m_; ++k) {
      for_column(head_[static_cast<std::size_t>(k)], [&](int i, double a) { trip.emplace_back(i, k, a); });
    }
    SpMat b(m_, m_);
    b.setFromTriplets(trip.begin(), trip.end());
    b.makeCompressed();
    lu_.analyzePattern(b);
    lu_.factorize(b);
    if (lu_.info() != Eigen::Success) return false;
    // Cheap guard against a numerically singular factor.
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(m_);
    Eigen::VectorXd rhs = b * ones;
    Eigen::VectorXd sol = lu_.solve(rhs);
    if (!sol.allFinite() || (sol - ones).lpNorm<Eigen::Infinity>() > 1e-6) return false;
    return true;
  }

  void ftran(std::vector<double>& v) const {
    if (m_ == 0) return;
    Eigen::Map<Eigen::VectorXd> map(v.data(), m_);
    Eigen::VectorXd out = lu_.solve(map);
    map = out;
    for (const auto& e : etas_) {
      const double xr = v[static_cast<std::size_t>(e.r)] / e.pivot;
      if (xr != 0.0) {
        for (std::size_t t = 0; t < e.idx.size(); ++t) v[static_cast<std::size_t>(e.idx[t])] -= e.val[t] * xr;
      }
      v[static_cast<std::size_t>(e.r)] = xr;
    }
  }

  void btran(std::vector<double>& v) {
    if (m_ == 0) return;
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double s = v[static_cast<std::size_t>(it->r)];
      for (std::size_t t = 0; t < it->idx.size(); ++t) s -= it->val[t] * v[static_cast<std::size_t>(it->idx[t])];
      v[static_cast<std::size_t>(it->r)] = s / it->pivot;
    }
    Eigen::Map<Eigen::VectorXd> map(v.data(), m_);
    Eigen::VectorXd out = lu_.transpose().solve(map);
    map = out;
  }

  void push_eta(int r, const std::vector<double>& col) {
    Eta e;
    e.r = r;
    e.pivot = col[static_cast<std::size_t>(r)];
    for (int k = 0; k < m_; ++k) {
      if (k != r && std::abs(col[static_cast<std::size_t>(k)]) > 1e-14) {
        e.idx.push_back(k);
        e.val.push_back(col[static_cast<std::size_t>(k)]);
      }
    }
    etas_.push_back(std::move(e));
  }

  void compute_primal() {
    std::vector<double> b(static_cast<std::size_t>(m_), 0.0);
    x_.assign(static_cast<std::size_t>(n_ + m_), 0.0);
    for (int j = 0; j < n_ + m_; ++j) {
      if (status_[j] == BasisStatus::Basic) continue;
      const double v = nonbasic_value(j);
      x_[j] = v;
      if (v != 0.0) for_column(j, [&](int i, double a) { b[static_cast<std::size_t>(i)] -= a * v; });
    }
    ftran(b);
    for (int k = 0; k < m_; ++k) x_[head_[static_cast<std::size_t>(k)]] = b[static_cast<std::size_t>(k)];
  }

  void compute_duals() {
    std::vector<double> y(static_cast<std::size_t>(m_));
    for (int k = 0; k < m_; ++k) y[static_cast<std::size_t>(k)] = cost_[head_[static_cast<std::size_t>(k)]];
    btran(y);
    y_ = y;
    d_.assign(static_cast<std::size_t>(n_ + m_), 0.0);
    for (int j = 0; j < n_ + m_; ++j) {
      if (status_[j] == BasisStatus::Basic) continue;
      double s = cost_[j];
      for_column(j, [&](int i, double a) { s -= a * y[static_cast<std::size_t>(i)]; });
      d_[j] = s;
    }
  }

  void recompute() {
    compute_primal();
    compute_duals();
  }

  double dual_infeasibility(int j) const {
    if (status_[j] == BasisStatus::Basic || fixed(j)) return 0.0;
    switch (status_[j]) {
      case BasisStatus::AtLower: return std::max(0.0, -d_[j]);
      case BasisStatus::AtUpper: return std::max(0.0, d_[j]);
      default: return std::abs(d_[j]);
    }
  }

  // |d_j| when d_j has the sign its status allows, else 0.
  double dual_slack(int j) const {
    switch (status_[j]) {
      case BasisStatus::AtLower: return std::max(0.0, d_[j]);
      case BasisStatus::AtUpper: return std::max(0.0, -d_[j]);
      default: return 0.0;
    }
  }

  void flip_boxed() {
    for (int j = 0; j < n_ + m_; ++j) {
      if (status_[j] == BasisStatus::Basic || !boxed(j) || fixed(j)) continue;
      if (status_[j] == BasisStatus::AtLower && d_[j] < -opt_.optimality_tol) status_[j] = BasisStatus::AtUpper;
      else if (status_[j] == BasisStatus::AtUpper && d_[j] > opt_.optimality_tol) status_[j] = BasisStatus::AtLower;
    }
  }

  bool dual_feasible() const {
    for (int j = 0; j < n_ + m_; ++j) {
      if (dual_infeasibility(j) > opt_.optimality_tol) return false;
    }
    return true;
  }

  double primal_infeasibility(int j) const {
    if (x_[j] < lo_[j]) return lo_[j] - x_[j];
    if (x_[j] > up_[j]) return x_[j] - up_[j];
    return 0.0;
  }

  bool primal_feasible() const {
    for (const auto j : head_) {
      if (primal_infeasibility(j) > opt_.feasibility_tol) return false;
    }
    return true;
  }

  bool bland() const { return degenerate_run_ >= opt_.degenerate_threshold; }

  void swap_basis(int r, int q, BasisStatus leaving_status) {
    const int p = head_[static_cast<std::size_t>(r)];
    status_[p] = leaving_status;
    where_[p] = -1;
    status_[q] = BasisStatus::Basic;
    where_[q] = r;
    head_[static_cast<std::size_t>(r)] = q;
  }

  LpStatus dual_loop() {
    std::vector<double> rho, col, tau, alpha(static_cast<std::size_t>(n_ + m_), 0.0);
    int stale_retries = 0;
    while (true) {
      if (iterations_ >= limit_) return LpStatus::IterationLimit;

      int r = -1;
      double best = 0.0;
      for (int k = 0; k < m_; ++k) {
        const int b = head_[static_cast<std::size_t>(k)];
        const double inf = primal_infeasibility(b);
        if (inf <= opt_.feasibility_tol) continue;
        if (bland()) {
          if (r < 0 || b < head_[static_cast<std::size_t>(r)]) r = k;
          continue;
        }
        const double score = inf * inf / dse_[static_cast<std::size_t>(k)];
        if (score > best) {
          best = score;
          r = k;
        }
      }
      if (r < 0) return LpStatus::Optimal;

      const int p = head_[static_cast<std::size_t>(r)];
      const bool to_upper = x_[p] > up_[p];
      const double s = to_upper ? 1.0 : -1.0;

      rho.assign(static_cast<std::size_t>(m_), 0.0);
      rho[static_cast<std::size_t>(r)] = 1.0;
      btran(rho);

      // Row r of B^-1 [A | -I] over nonbasic columns, then a Harris ratio test.
      double theta_max = kInf;
      for (int j = 0; j < n_ + m_; ++j) {
        if (status_[j] == BasisStatus::Basic) continue;
        double a = 0.0;
        for_column(j, [&](int i, double v) { a += v * rho[static_cast<std::size_t>(i)]; });
        alpha[j] = a;
        if (fixed(j) || std::abs(a) < opt_.pivot_tol) continue;
        const double at = s * a;
        const bool eligible = (status_[j] == BasisStatus::AtLower && at > 0) ||
                              (status_[j] == BasisStatus::AtUpper && at < 0) || status_[j] == BasisStatus::Free;
        if (!eligible) continue;
        const double dj = dual_slack(j);
        theta_max = std::min(theta_max, (dj + opt_.optimality_tol) / std::abs(a));
      }
      int q = -1;
      double q_abs = 0.0;
      double q_ratio = kInf;
      for (int j = 0; j < n_ + m_; ++j) {
        if (status_[j] == BasisStatus::Basic || fixed(j)) continue;
        const double a = alpha[j];
        if (std::abs(a) < opt_.pivot_tol) continue;
        const double at = s * a;
        const bool eligible = (status_[j] == BasisStatus::AtLower && at > 0) ||
                              (status_[j] == BasisStatus::AtUpper && at < 0) || status_[j] == BasisStatus::Free;
        if (!eligible) continue;
        const double dj = dual_slack(j);
        const double ratio = dj / std::abs(a);
        if (ratio > theta_max) continue;
        if (bland()) {
          if (ratio < q_ratio - 1e-12 || (ratio <= q_ratio + 1e-12 && (q < 0 || j < q))) {
            q = j;
            q_ratio = ratio;
            q_abs = std::abs(a);
          }
        } else if (std::abs(a) > q_abs) {
          q = j;
          q_abs = std::abs(a);
          q_ratio = ratio;
        }
      }
      if (q < 0) {
        if (!etas_.empty() && stale_retries++ < 2) {
          if (!refactor()) return LpStatus::NumericalFailure;
          recompute();
          continue;
        }
        return LpStatus::Infeasible;
      }

      col.assign(static_cast<std::size_t>(m_), 0.0);
      for_column(q, [&](int i, double v) { col[static_cast<std::size_t>(i)] = v; });
      ftran(col);
      const double piv = col[static_cast<std::size_t>(r)];
      if (std::abs(piv - alpha[q]) > 1e-7 * (1.0 + std::abs(piv)) || std::abs(piv) < 1e-11) {
        if (stale_retries++ < 3) {
          if (!refactor()) return LpStatus::NumericalFailure;
          recompute();
          continue;
        }
        return LpStatus::NumericalFailure;
      }
      stale_retries = 0;

      // Dual step: d_q goes to zero, the leaving column takes -theta.
      const double th_clean = dual_slack(q) > 0 ? d_[q] / piv : 0.0;
      for (int j = 0; j < n_ + m_; ++j) {
        if (status_[j] == BasisStatus::Basic || j == q) continue;
        d_[j] -= th_clean * alpha[j];
      }
      d_[q] = 0.0;
      d_[p] = -th_clean;
      degenerate_run_ = std::abs(th_clean) <= 1e-12 ? degenerate_run_ + 1 : 0;

      // Primal step.
      const double bound = to_upper ? up_[p] : lo_[p];
      const double delta = (x_[p] - bound) / piv;
      for (int k = 0; k < m_; ++k) x_[head_[static_cast<std::size_t>(k)]] -= delta * col[static_cast<std::size_t>(k)];
      x_[q] += delta;
      x_[p] = bound;

      // Dual steepest-edge weights.
      tau = rho;
      ftran(tau);
      double wr = 0.0;
      for (const auto v : rho) wr += v * v;
      for (int k = 0; k < m_; ++k) {
        if (k == r) continue;
        const double ratio = col[static_cast<std::size_t>(k)] / piv;
        if (ratio == 0.0) continue;
        auto& w = dse_[static_cast<std::size_t>(k)];
        w = std::max(w - 2.0 * ratio * tau[static_cast<std::size_t>(k)] + ratio * ratio * wr, 1e-6);
      }
      dse_[static_cast<std::size_t>(r)] = std::max(wr / (piv * piv), 1e-6);

      swap_basis(r, q, to_upper ? BasisStatus::AtUpper : BasisStatus::AtLower);
      normalize_status(p);
      push_eta(r, col);
      ++iterations_;

      if (static_cast<int>(etas_.size()) >= opt_.refactor_interval) {
        if (!refactor()) return LpStatus::NumericalFailure;
        recompute();
      }
    }
  }

  LpStatus primal_loop() {
    std::vector<double> col;
    while (true) {
      if (iterations_ >= limit_) return LpStatus::IterationLimit;
      compute_duals();

      int q = -1;
      double best = 0.0;
      for (int j = 0; j < n_ + m_; ++j) {
        const double inf = dual_infeasibility(j);
        if (inf <= opt_.optimality_tol) continue;
        if (bland()) {
          if (q < 0) q = j;
          continue;
        }
        if (inf > best) {
          best = inf;
          q = j;
        }
      }
      if (q < 0) return LpStatus::Optimal;
      const double sigma = status_[q] == BasisStatus::AtUpper || (status_[q] == BasisStatus::Free && d_[q] > 0) ? -1.0 : 1.0;

      col.assign(static_cast<std::size_t>(m_), 0.0);
      for_column(q, [&](int i, double v) { col[static_cast<std::size_t>(i)] = v; });
      ftran(col);

      double t_max = kInf;
      for (int k = 0; k < m_; ++k) {
        const double a = col[static_cast<std::size_t>(k)];
        if (std::abs(a) < opt_.pivot_tol) continue;
        const int b = head_[static_cast<std::size_t>(k)];
        const double rate = -sigma * a;
        if (rate < 0 && std::isfinite(lo_[b])) t_max = std::min(t_max, (x_[b] - lo_[b] + opt_.feasibility_tol) / -rate);
        if (rate > 0 && std::isfinite(up_[b])) t_max = std::min(t_max, (up_[b] - x_[b] + opt_.feasibility_tol) / rate);
      }
      int r = -1;
      double r_abs = 0.0;
      double t = kInf;
      bool r_to_upper = false;
      for (int k = 0; k < m_; ++k) {
        const double a = col[static_cast<std::size_t>(k)];
        if (std::abs(a) < opt_.pivot_tol) continue;
        const int b = head_[static_cast<std::size_t>(k)];
        const double rate = -sigma * a;
        double ratio = kInf;
        bool hits_upper = false;
        if (rate < 0 && std::isfinite(lo_[b])) ratio = std::max(0.0, (x_[b] - lo_[b]) / -rate);
        if (rate > 0 && std::isfinite(up_[b])) {
          ratio = std::max(0.0, (up_[b] - x_[b]) / rate);
          hits_upper = true;
        }
        if (ratio > t_max) continue;
        const bool better = bland() ? (r < 0 || ratio < t - 1e-12 || (ratio <= t + 1e-12 && b < head_[static_cast<std::size_t>(r)]))
                                    : std::abs(a) > r_abs;
        if (better) {
          r = k;
          r_abs = std::abs(a);
          t = ratio;
          r_to_upper = hits_upper;
        }
      }
      const double range = up_[q] - lo_[q];
      if (r < 0 && !std::isfinite(range)) return LpStatus::Unbounded;
      degenerate_run_ = (r >= 0 && t <= 1e-12) ? degenerate_run_ + 1 : 0;

      if (r < 0 || range <= t) {
        // Bound flip of the entering column; the basis is unchanged.
        for (int k = 0; k < m_; ++k) x_[head_[static_cast<std::size_t>(k)]] -= sigma * range * col[static_cast<std::size_t>(k)];
        status_[q] = sigma > 0 ? BasisStatus::AtUpper : BasisStatus::AtLower;
        x_[q] = nonbasic_value(q);
        ++iterations_;
        continue;
      }

      for (int k = 0; k < m_; ++k) x_[head_[static_cast<std::size_t>(k)]] -= sigma * t * col[static_cast<std::size_t>(k)];
      x_[q] += sigma * t;
      const int p = head_[static_cast<std::size_t>(r)];
      x_[p] = r_to_upper ? up_[p] : lo_[p];
      swap_basis(r, q, r_to_upper ? BasisStatus::AtUpper : BasisStatus::AtLower);
      normalize_status(p);
      push_eta(r, col);
      dse_[static_cast<std::size_t>(r)] = 1.0;
      ++iterations_;
      if (static_cast<int>(etas_.size()) >= opt_.refactor_interval) {
        if (!refactor()) return LpStatus::NumericalFailure;
        compute_primal();
      }
    }
  }

  LpSolution finish(LpStatus st) {
    LpSolution sol;
    sol.status = st;
    sol.iterations = iterations_;
    if (x_.size() != static_cast<std::size_t>(n_ + m_)) x_.assign(static_cast<std::size_t>(n_ + m_), 0.0);
    if (d_.size() != static_cast<std::size_t>(n_ + m_)) d_.assign(static_cast<std::size_t>(n_ + m_), 0.0);
    if (y_.size() != static_cast<std::size_t>(m_)) y_.assign(static_cast<std::size_t>(m_), 0.0);
    sol.x.resize(static_cast<std::size_t>(n_));
    sol.reduced_costs.resize(static_cast<std::size_t>(n_));
    for (int j = 0; j < n_; ++j) {
      sol.x[j] = std::clamp(x_[j], lo_[j], up_[j]);
      sol.reduced_costs[j] = -d_[j];
    }
    sol.row_activity.resize(static_cast<std::size_t>(m_));
    sol.duals.resize(static_cast<std::size_t>(m_));
    for (int k = 0; k < m_; ++k) {
      sol.row_activity[k] = model_.activity(k, sol.x);
      sol.duals[k] = -y_[k];
    }
    sol.objective = model_.objective_value(sol.x);
    sol.basis.columns.assign(status_.begin(), status_.begin() + n_);
    sol.basis.row_ids.resize(static_cast<std::size_t>(m_));
    sol.basis.rows.resize(static_cast<std::size_t>(m_));
    for (int k = 0; k < m_; ++k) {
      sol.basis.row_ids[k] = model_.row(k).id;
      sol.basis.rows[k] = status_[n_ + k];
    }
    return sol;
  }

  const LpModel& model_;
  SimplexOptions opt_;
  int n_ = 0;
  int m_ = 0;
  std::vector<int> col_start_;
  std::vector<int> col_row_;
  std::vector<double> col_val_;
  std::vector<double> lo_, up_, cost_;
  std::vector<BasisStatus> status_;
  std::vector<int> head_;
  std::vector<int> where_;
  std::vector<double> x_, d_, y_, dse_;
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;
  long long iterations_ = 0;
  long long limit_ = 0;
  int degenerate_run_ = 0;
  int fallbacks_ = 0;
};

}  // namespace

LpSolution simplex_solve(const LpModel& model, const LpBasis* warm_start, const SimplexOptions& options) {
  Simplex s(model, options);
  return s.run(warm_start);
}

}  // namespace gmclp
