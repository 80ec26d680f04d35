#include "mfnipr/milp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <ostream>
#include <optional>
#include <queue>

namespace mfnipr {

int LinearProgram::add_var(double lower, double upper, double obj, std::string name) {
  vars.push_back({lower, upper, std::move(name)});
  objective.push_back(obj);
  return static_cast<int>(vars.size()) - 1;
}

void LinearProgram::add_row(std::vector<std::pair<int, double>> coeffs, Relation rel, double rhs,
                            std::string name) {
  rows.push_back({std::move(coeffs), rel, rhs, std::move(name)});
}

int MixedIntegerProgram::add_binary(double obj, std::string name) {
  const int v = lp.add_var(0.0, 1.0, obj, std::move(name));
  integral.resize(lp.vars.size(), 0);
  integral[v] = 1;
  return v;
}

void MixedIntegerProgram::mark_integral(int var) {
  integral.resize(lp.vars.size(), 0);
  integral[var] = 1;
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::LimitReached: return "limit-reached";
  }
  return "?";
}

namespace {

constexpr double kPrimalTol = 1e-9;
constexpr double kDualTol = 1e-9;
constexpr double kPivotTol = 1e-10;
constexpr double kDegenerate = 1e-11;
constexpr int kBlandStreak = 60;

// Dense bounded-variable simplex over the canonical tableau B^-1 A. Columns
// are [structural | slacks | artificials]; nonbasic columns sit at one of
// their bounds. Rows are stored row-major with a fixed stride.
class Simplex {
 public:
  using BoundChange = std::tuple<int, double, double>;

  Simplex(const LinearProgram& lp, const std::vector<double>& cost_min,
          const std::vector<BoundChange>& overrides = {})
      : m_(static_cast<int>(lp.rows.size())),
        nstruct_(static_cast<int>(lp.vars.size())) {
    std::vector<double> slb(nstruct_), sub(nstruct_);
    for (int j = 0; j < nstruct_; ++j) {
      slb[j] = lp.vars[j].lower;
      sub[j] = lp.vars[j].upper;
    }
    for (const auto& [j, nl, nu] : overrides) {
      slb[j] = nl;
      sub[j] = nu;
    }

    // Count rows the all-slack basis cannot satisfy to size the tableau once.
    std::vector<double> act(m_, 0.0);
    for (int r = 0; r < m_; ++r)
      for (const auto& [j, v] : lp.rows[r].coeffs)
        act[r] += v * (std::isfinite(slb[j]) ? slb[j] : sub[j]);

    int nart = 0;
    for (int r = 0; r < m_; ++r) {
      const double slack = lp.rows[r].rhs - act[r];
      if (violates_slack(lp.rows[r].rel, slack)) ++nart;
    }

    ncols_ = nstruct_ + m_ + nart;
    stride_ = ncols_;
    mat_.assign(static_cast<std::size_t>(m_) * stride_, 0.0);
    lb_.assign(ncols_, 0.0);
    ub_.assign(ncols_, 0.0);
    cost_.assign(ncols_, 0.0);
    at_upper_.assign(ncols_, 0);
    in_basis_.assign(ncols_, 0);
    basic_.assign(m_, -1);
    xb_.assign(m_, 0.0);

    for (int j = 0; j < nstruct_; ++j) {
      lb_[j] = slb[j];
      ub_[j] = sub[j];
      cost_[j] = cost_min[j];
      at_upper_[j] = !std::isfinite(lb_[j]) ? 1 : 0;
    }
    for (int r = 0; r < m_; ++r)
      for (const auto& [j, v] : lp.rows[r].coeffs) row(r)[j] += v;

    int next = nstruct_ + m_;
    phase1_cost_.assign(ncols_, 0.0);
    for (int r = 0; r < m_; ++r) {
      const int sl = nstruct_ + r;
      row(r)[sl] = 1.0;
      switch (lp.rows[r].rel) {
        case Relation::LessEqual: lb_[sl] = 0.0; ub_[sl] = kInf; break;
        case Relation::GreaterEqual: lb_[sl] = -kInf; ub_[sl] = 0.0; at_upper_[sl] = 1; break;
        case Relation::Equal: lb_[sl] = 0.0; ub_[sl] = 0.0; break;
      }
      const double slack = lp.rows[r].rhs - act[r];
      if (!violates_slack(lp.rows[r].rel, slack)) {
        basic_[r] = sl;
        in_basis_[sl] = 1;
        xb_[r] = slack;
      } else {
        const int art = next++;
        row(r)[art] = 1.0;
        basic_[r] = art;
        in_basis_[art] = 1;
        xb_[r] = slack;
        if (slack >= 0) {
          lb_[art] = 0.0; ub_[art] = kInf; phase1_cost_[art] = 1.0;
        } else {
          lb_[art] = -kInf; ub_[art] = 0.0; phase1_cost_[art] = -1.0;
          at_upper_[art] = 1;
        }
        artificials_.push_back(art);
      }
    }
  }

  SolveStatus primal_solve() {
    if (!artificials_.empty() || first_solve_) {
      first_solve_ = false;
      if (!artificials_.empty()) {
        load_costs(phase1_cost_);
        const SolveStatus st = primal_loop();
        if (st != SolveStatus::Optimal || phase1_objective() > 1e-7) {
          healthy_ = false;  // phase-1 state: unusable for warm continuation
          return SolveStatus::Infeasible;
        }
        for (int a : artificials_) { lb_[a] = 0.0; ub_[a] = 0.0; at_upper_[a] = 0; }
      }
    }
    load_costs(cost_);
    const SolveStatus st = primal_loop();
    if (st == SolveStatus::Unbounded) healthy_ = false;
    return st;
  }

  // Restores primal feasibility after bound changes; reduced costs stay valid.
  // The dual objective rises monotonically, so crossing `cutoff` proves the
  // node's LP bound without finishing the repair.
  SolveStatus dual_repair(double cutoff = kInf) {
    cutoff_hit_ = false;
    if (!healthy_) return SolveStatus::LimitReached;  // caller must re-solve cold
    // Widened bounds can strand a nonbasic at the dual-infeasible bound; flip
    // those first (both bounds are finite for every branchable variable).
    for (int j = 0; j < ncols_; ++j) {
      if (in_basis_[j] || lb_[j] == ub_[j]) continue;
      if (at_upper_[j] && d_[j] > kDualTol && std::isfinite(lb_[j])) {
        const double dv = lb_[j] - ub_[j];
        for (int i = 0; i < m_; ++i) xb_[i] -= cell(i, j) * dv;
        at_upper_[j] = 0;
      } else if (!at_upper_[j] && d_[j] < -kDualTol && std::isfinite(ub_[j])) {
        const double dv = ub_[j] - lb_[j];
        for (int i = 0; i < m_; ++i) xb_[i] -= cell(i, j) * dv;
        at_upper_[j] = 1;
      }
    }
    for (int j = 0; j < ncols_; ++j) {
      if (in_basis_[j] || lb_[j] == ub_[j]) continue;
      if ((at_upper_[j] && d_[j] > kDualTol) || (!at_upper_[j] && d_[j] < -kDualTol))
        return SolveStatus::LimitReached;  // stranded; the caller re-solves cold
    }
    long iters = 0;
    const long cap = 40L * (m_ + ncols_) + 2000;
    while (true) {
      if (++iters > cap) return SolveStatus::LimitReached;  // caller falls back to a cold solve
      int r = -1;
      double worst = kPrimalTol;
      for (int i = 0; i < m_; ++i) {
        const int b = basic_[i];
        const double below = lb_[b] - xb_[i];
        const double above = xb_[i] - ub_[b];
        const double v = std::max(below, above);
        if (v > worst) { worst = v; r = i; }
      }
      if (r < 0) return SolveStatus::Optimal;
      if (objective() >= cutoff) {
        cutoff_hit_ = true;
        return SolveStatus::Optimal;
      }

      const int b = basic_[r];
      const bool need_increase = xb_[r] < lb_[b];
      const double* tr = row(r);
      int q = -1;
      double best_ratio = kInf;
      double best_alpha = 0.0;
      for (int j = 0; j < ncols_; ++j) {
        if (in_basis_[j] || lb_[j] == ub_[j]) continue;
        const double a = tr[j];
        if (std::abs(a) < kPivotTol) continue;
        const bool up = at_upper_[j] == 0;  // nonbasic at lb can only increase
        bool eligible;
        if (need_increase) eligible = up ? (a < 0) : (a > 0);
        else eligible = up ? (a > 0) : (a < 0);
        if (!eligible) continue;
        const double ratio = std::abs(d_[j] / a);
        if (ratio < best_ratio - 1e-9 ||
            (ratio < best_ratio + 1e-9 && std::abs(a) > std::abs(best_alpha))) {
          best_ratio = ratio;
          best_alpha = a;
          q = j;
        }
      }
      if (q < 0) return SolveStatus::Infeasible;

      const double target = need_increase ? lb_[b] : ub_[b];
      const double dir = at_upper_[q] ? -1.0 : 1.0;
      const double delta = (target - xb_[r]) / (-tr[q] * dir);
      pivot(r, q, dir, delta, /*leaving_at_upper=*/!need_increase);
    }
  }

  void change_bound(int j, double nl, double nu) {
    if (in_basis_[j]) {
      lb_[j] = nl;
      ub_[j] = nu;
      return;
    }
    const double v_old = at_upper_[j] ? ub_[j] : lb_[j];
    lb_[j] = nl;
    ub_[j] = nu;
    if (at_upper_[j] && !std::isfinite(nu)) at_upper_[j] = 0;
    if (!at_upper_[j] && !std::isfinite(nl)) at_upper_[j] = 1;
    const double v_new = at_upper_[j] ? ub_[j] : lb_[j];
    const double dv = v_new - v_old;
    if (dv != 0.0) {
      for (int i = 0; i < m_; ++i) xb_[i] -= cell(i, j) * dv;
    }
  }

  double value(int j) const {
    if (in_basis_[j]) {
      for (int i = 0; i < m_; ++i)
        if (basic_[i] == j) return xb_[i];
    }
    return at_upper_[j] ? ub_[j] : lb_[j];
  }

  void extract(std::vector<double>& x) const {
    x.assign(nstruct_, 0.0);
    for (int j = 0; j < nstruct_; ++j) x[j] = at_upper_[j] ? ub_[j] : lb_[j];
    for (int i = 0; i < m_; ++i)
      if (basic_[i] < nstruct_) x[basic_[i]] = xb_[i];
  }

  double objective() const {
    double z = 0.0;
    std::vector<double> x;
    extract(x);
    for (int j = 0; j < nstruct_; ++j) z += cost_[j] * x[j];
    return z;
  }

  long pivots() const { return pivots_; }
  void add_pivots(long p) { pivots_ += p; }
  bool cutoff_hit() const { return cutoff_hit_; }

 private:
  static bool violates_slack(Relation rel, double slack) {
    switch (rel) {
      case Relation::LessEqual: return slack < -kPrimalTol;
      case Relation::GreaterEqual: return slack > kPrimalTol;
      case Relation::Equal: return std::abs(slack) > kPrimalTol;
    }
    return false;
  }

  double* row(int r) { return mat_.data() + static_cast<std::size_t>(r) * stride_; }
  const double* row(int r) const { return mat_.data() + static_cast<std::size_t>(r) * stride_; }
  double cell(int r, int j) const { return row(r)[j]; }

  double phase1_objective() const {
    double z = 0.0;
    for (int a : artificials_) z += phase1_cost_[a] * value(a);
    return z;
  }

  void load_costs(const std::vector<double>& c) {
    d_ = c;
    for (int i = 0; i < m_; ++i) {
      const double cb = c[basic_[i]];
      if (cb == 0.0) continue;
      const double* tr = row(i);
      for (int j = 0; j < ncols_; ++j) d_[j] -= cb * tr[j];
    }
  }

  SolveStatus primal_loop() {
    int streak = 0;
    long iters = 0;
    const long cap = 200L * (m_ + ncols_) + 20000;
    while (true) {
      if (++iters > cap) throw NumericalError("simplex: iteration cap exceeded");
      const bool bland = streak >= kBlandStreak;
      int q = -1;
      double best = kDualTol;
      for (int j = 0; j < ncols_; ++j) {
        if (in_basis_[j] || lb_[j] == ub_[j]) continue;
        const double viol = at_upper_[j] ? d_[j] : -d_[j];
        if (viol > best) {
          best = viol;
          q = j;
          if (bland) break;
        }
      }
      if (q < 0) return SolveStatus::Optimal;

      const double dir = at_upper_[q] ? -1.0 : 1.0;
      // Ratio test with bound flips; ties prefer the largest pivot magnitude.
      double limit = ub_[q] - lb_[q];  // own-span flip
      int r = -1;
      bool leaving_at_upper = false;
      double pivot_alpha = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double a = cell(i, q);
        if (std::abs(a) < kPivotTol) continue;
        const double rate = -dir * a;  // d xb_i / d step
        const int b = basic_[i];
        double room, step;
        bool hits_upper;
        if (rate < 0) {
          if (!std::isfinite(lb_[b])) continue;
          room = xb_[i] - lb_[b];
          step = room / -rate;
          hits_upper = false;
        } else {
          if (!std::isfinite(ub_[b])) continue;
          room = ub_[b] - xb_[i];
          step = room / rate;
          hits_upper = true;
        }
        if (step < -1e-12) step = 0.0;
        if (step < limit - 1e-9 ||
            (step < limit + 1e-9 && r >= 0 && std::abs(a) > std::abs(pivot_alpha)) ||
            (step < limit + 1e-9 && r < 0 && step <= limit)) {
          limit = step;
          r = i;
          leaving_at_upper = hits_upper;
          pivot_alpha = a;
        }
      }
      if (!std::isfinite(limit)) return SolveStatus::Unbounded;
      if (limit <= kDegenerate) ++streak; else streak = 0;

      if (r < 0) {
        // Pure bound flip across the variable's own span.
        const double dv = dir * limit;
        for (int i = 0; i < m_; ++i) xb_[i] -= cell(i, q) * dv;
        at_upper_[q] ^= 1;
        continue;
      }
      if (std::abs(pivot_alpha) < kPivotTol)
        throw NumericalError("simplex: pivot magnitude below 1e-10 persists");
      pivot(r, q, dir, limit, leaving_at_upper);
    }
  }

  // Moves entering q by delta in direction dir, seats it on row r, and retires
  // the old basic at the bound it reached.
  void pivot(int r, int q, double dir, double delta, bool leaving_at_upper) {
    ++pivots_;
    const double vq = (dir > 0 ? lb_[q] : ub_[q]) + dir * delta;
    for (int i = 0; i < m_; ++i) xb_[i] -= cell(i, q) * dir * delta;

    const int leaving = basic_[r];
    in_basis_[leaving] = 0;
    at_upper_[leaving] = leaving_at_upper ? 1 : 0;
    basic_[r] = q;
    in_basis_[q] = 1;
    xb_[r] = vq;

    double* pr = row(r);
    const double p = pr[q];
    const double inv = 1.0 / p;
    for (int j = 0; j < ncols_; ++j) pr[j] *= inv;
    pr[q] = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* ri = row(i);
      const double f = ri[q];
      if (f == 0.0) continue;
      for (int j = 0; j < ncols_; ++j) ri[j] -= f * pr[j];
      ri[q] = 0.0;
    }
    const double dq = d_[q];
    if (dq != 0.0) {
      for (int j = 0; j < ncols_; ++j) d_[j] -= dq * pr[j];
      d_[q] = 0.0;
    }
  }

  int m_, nstruct_, ncols_, stride_ = 0;
  std::vector<double> mat_, xb_, lb_, ub_, cost_, phase1_cost_, d_;
  std::vector<int> basic_;
  std::vector<std::int8_t> at_upper_, in_basis_;
  std::vector<int> artificials_;
  bool first_solve_ = true;
  bool cutoff_hit_ = false;
  bool healthy_ = true;
  long pivots_ = 0;
};

std::vector<double> minimize_costs(const LinearProgram& lp) {
  std::vector<double> c = lp.objective;
  c.resize(lp.vars.size(), 0.0);
  if (lp.sense == Sense::Maximize)
    for (double& v : c) v = -v;
  return c;
}

double user_sense(const LinearProgram& lp, double internal) {
  return lp.sense == Sense::Maximize ? -internal : internal;
}

}  // namespace

MipSolution solve_lp(const LinearProgram& lp) {
  const auto t0 = std::chrono::steady_clock::now();
  MipSolution sol;
  Simplex spx(lp, minimize_costs(lp));
  const SolveStatus st = spx.primal_solve();
  sol.status = st;
  if (st == SolveStatus::Optimal) {
    spx.extract(sol.x);
    sol.objective = user_sense(lp, spx.objective());
    sol.bound = sol.objective;
  }
  sol.node_count = 1;
  sol.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return sol;
}

namespace {

struct BnbNode {
  double bound = -kInf;  // parent LP objective (internal min sense)
  long seq = 0;
  std::vector<std::tuple<int, double, double>> changes;  // (var, lb, ub) from root
};

struct NodeOrder {
  bool operator()(const BnbNode& a, const BnbNode& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
    return a.seq > b.seq;
  }
};

bool verify_candidate(const MixedIntegerProgram& mip, const std::vector<double>& cand) {
  const LinearProgram& lp = mip.lp;
  if (cand.size() != lp.vars.size()) return false;
  for (std::size_t j = 0; j < lp.vars.size(); ++j) {
    if (cand[j] < lp.vars[j].lower - 1e-6 || cand[j] > lp.vars[j].upper + 1e-6) return false;
    if (j < mip.integral.size() && mip.integral[j] &&
        std::abs(cand[j] - std::round(cand[j])) > 1e-6)
      return false;
  }
  for (const auto& r : lp.rows) {
    double act = 0.0;
    for (const auto& [j, v] : r.coeffs) act += v * cand[j];
    switch (r.rel) {
      case Relation::LessEqual:
        if (act > r.rhs + 1e-6) return false;
        break;
      case Relation::GreaterEqual:
        if (act < r.rhs - 1e-6) return false;
        break;
      case Relation::Equal:
        if (std::abs(act - r.rhs) > 1e-6) return false;
        break;
    }
  }
  return true;
}

}  // namespace

MipSolution solve_mip(const MixedIntegerProgram& mip, const SolveLimits& limits,
                      const MipCallbacks& callbacks) {
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  const LinearProgram& lp = mip.lp;
  const std::vector<double> cmin = minimize_costs(lp);
  for (std::size_t j = 0; j < mip.integral.size(); ++j) {
    if (mip.integral[j] && (lp.vars[j].lower < -1e-9 || lp.vars[j].upper > 1.0 + 1e-9))
      throw ValidationError("solve_mip: integral variable bounds must lie within [0,1]");
  }

  MipSolution sol;
  sol.status = SolveStatus::Infeasible;

  double incumbent_obj = kInf;  // internal (min) sense
  std::vector<double> incumbent_x;
  double pruned_bound = kInf;   // tightest bound among gap-pruned subtrees
  long nodes = 0;
  long seq = 0;

  std::priority_queue<BnbNode, std::vector<BnbNode>, NodeOrder> open;
  open.push(BnbNode{-kInf, seq++, {}});

  const double prune_slack =
      std::max(limits.abs_gap, limits.objective_granularity > 0.0
                                   ? limits.objective_granularity - 1e-6
                                   : 0.0);

  auto try_candidate = [&](std::span<const double> x_lp) {
    if (!callbacks.candidate) return;
    auto cand = callbacks.candidate(x_lp);
    if (!cand || !verify_candidate(mip, *cand)) return;
    double obj = 0.0;
    for (std::size_t j = 0; j < cmin.size(); ++j) obj += cmin[j] * (*cand)[j];
    if (obj < incumbent_obj - 1e-12) {
      incumbent_obj = obj;
      incumbent_x = std::move(*cand);
    }
  };

  bool hit_limit = false;
  bool root_unbounded = false;
  std::vector<double> x_node;

  // One live tableau serves the whole tree: bound changes keep the reduced
  // costs dual feasible, so jumps revert/apply bound diffs and dual-repair.
  std::optional<Simplex> live;
  std::vector<std::tuple<int, double, double>> live_path;
  long cold_solves = 0;
  auto retarget = [&](const std::vector<std::tuple<int, double, double>>& target,
                      double cutoff) {
    if (!live) {
      ++cold_solves;
      live.emplace(lp, cmin, target);
      live_path = target;
      const SolveStatus st = live->primal_solve();
      if (st != SolveStatus::Optimal) live.reset();
      return st;
    }
    for (const auto& [j, nl, nu] : live_path) {
      bool kept = false;
      for (const auto& [tj, tl, tu] : target) kept |= tj == j;
      if (!kept) live->change_bound(j, lp.vars[j].lower, lp.vars[j].upper);
    }
    for (const auto& [j, nl, nu] : target) live->change_bound(j, nl, nu);
    live_path = target;
    const long before = live->pivots();
    SolveStatus st = live->dual_repair(cutoff);
    if (st == SolveStatus::LimitReached) {
      ++cold_solves;
      const long keep = live->pivots();
      live.emplace(lp, cmin, target);
      live->add_pivots(keep);
      st = live->primal_solve();
      if (st != SolveStatus::Optimal) live.reset();
    }
    (void)before;
    return st;
  };

  const bool debug_verify = std::getenv("MFNIPR_MILP_VERIFY") != nullptr;
  auto cross_check = [&](const std::vector<std::tuple<int, double, double>>& path,
                         SolveStatus st, double bound, bool at_cutoff) {
    if (!debug_verify) return;
    Simplex cold(lp, cmin, path);
    const SolveStatus ref = cold.primal_solve();
    const double ref_obj = ref == SolveStatus::Optimal ? cold.objective() : 0.0;
    const bool status_ok = st == ref || (at_cutoff && ref == SolveStatus::Optimal);
    const bool bound_ok = st != SolveStatus::Optimal ||
                          (at_cutoff ? bound <= ref_obj + 1e-6
                                     : std::abs(bound - ref_obj) <= 1e-6);
    if (!status_ok || !bound_ok) {
      std::fprintf(stderr, "[milp-verify] node depth %zu: warm %s %.9f vs cold %s %.9f\n",
                   path.size(), to_string(st), bound, to_string(ref), ref_obj);
    }
  };

  while (!open.empty() && !hit_limit) {
    BnbNode top = open.top();
    open.pop();
    if (top.bound >= incumbent_obj - prune_slack) {
      pruned_bound = std::min(pruned_bound, top.bound);
      continue;
    }

    SolveStatus st = retarget(top.changes, incumbent_obj - prune_slack);
    std::vector<std::tuple<int, double, double>> path = top.changes;
    bool diving = true;
    while (diving && !hit_limit) {
      ++nodes;
      if (elapsed() > limits.time_limit || nodes > limits.node_limit) {
        hit_limit = true;
        pruned_bound = std::min(pruned_bound, top.bound);
        break;
      }
      if (st == SolveStatus::Unbounded) {
        if (path.empty()) root_unbounded = true;
        pruned_bound = -kInf;
        break;
      }
      if (st != SolveStatus::Optimal) {
        cross_check(path, st, 0.0, false);
        break;  // infeasible node
      }

      const double bound = live->objective();
      cross_check(path, st, bound, live->cutoff_hit());
      if (live->cutoff_hit() || bound >= incumbent_obj - prune_slack) {
        pruned_bound = std::min(pruned_bound, bound);
        break;
      }

      live->extract(x_node);
      try_candidate(x_node);
      if (bound >= incumbent_obj - prune_slack) {
        pruned_bound = std::min(pruned_bound, bound);
        break;
      }

      // Most-fractional binary by weighted score, ties to the lowest index.
      int branch = -1;
      double best_score = 0.0;
      for (std::size_t j = 0; j < mip.integral.size(); ++j) {
        if (!mip.integral[j]) continue;
        const double f = std::abs(x_node[j] - std::round(x_node[j]));
        if (f <= 1e-6) continue;
        const double w = j < limits.branch_weight.size() ? limits.branch_weight[j] : 1.0;
        const double score = f * w;
        if (score > best_score + 1e-12) {
          best_score = score;
          branch = static_cast<int>(j);
        }
      }
      if (branch < 0) {
        if (bound < incumbent_obj - 1e-12) {
          incumbent_obj = bound;
          incumbent_x = x_node;
        }
        break;
      }

      const double fixed = x_node[branch] >= 0.5 ? 1.0 : 0.0;
      BnbNode sibling;
      sibling.bound = bound;
      sibling.seq = seq++;
      sibling.changes = path;
      sibling.changes.emplace_back(branch, 1.0 - fixed, 1.0 - fixed);
      open.push(std::move(sibling));

      path.emplace_back(branch, fixed, fixed);
      live->change_bound(branch, fixed, fixed);
      live_path = path;
      st = live->dual_repair(incumbent_obj - prune_slack);
      if (st == SolveStatus::LimitReached) {
        // Dual repair stalled; redo this node cold.
        ++cold_solves;
        const long keep = live->pivots();
        long kept_pivots = keep;
        live.emplace(lp, cmin, path);
        live->add_pivots(kept_pivots);
        st = live->primal_solve();
        if (st != SolveStatus::Optimal) {
          live.reset();
          if (st == SolveStatus::Unbounded && path.empty()) root_unbounded = true;
          break;
        }
      }
    }
  }

  while (!open.empty()) {
    pruned_bound = std::min(pruned_bound, open.top().bound);
    open.pop();
  }

  const double global_bound = std::min(incumbent_obj, pruned_bound);
  sol.node_count = nodes;
  sol.wall_seconds = elapsed();
  sol.pivots = live ? live->pivots() : 0;
  sol.cold_solves = cold_solves;
  if (root_unbounded && incumbent_x.empty()) {
    sol.status = SolveStatus::Unbounded;
    return sol;
  }
  if (!incumbent_x.empty()) {
    sol.x = incumbent_x;
    sol.objective = user_sense(lp, incumbent_obj);
    sol.bound = user_sense(lp, global_bound);
    sol.gap = std::abs(incumbent_obj - global_bound);
    sol.status = (!hit_limit || sol.gap <= limits.abs_gap) ? SolveStatus::Optimal
                                                           : SolveStatus::LimitReached;
    if (sol.status == SolveStatus::Optimal) {
      sol.gap = std::min(sol.gap, limits.abs_gap);
      sol.bound = sol.objective;
    }
  } else {
    sol.status = hit_limit ? SolveStatus::LimitReached : SolveStatus::Infeasible;
    sol.bound = user_sense(lp, global_bound);
  }
  return sol;
}

void write_model(const MixedIntegerProgram& mip, std::ostream& out) {
  const LinearProgram& lp = mip.lp;
  out << "NAME model\n";
  out << (lp.sense == Sense::Minimize ? "OBJSENSE MIN\n" : "OBJSENSE MAX\n");
  out << "COLUMNS\n";
  for (std::size_t j = 0; j < lp.vars.size(); ++j) {
    out << "  " << (lp.vars[j].name.empty() ? "x" + std::to_string(j) : lp.vars[j].name)
        << " obj " << lp.objective[j];
    if (j < mip.integral.size() && mip.integral[j]) out << " integer";
    out << " [" << lp.vars[j].lower << "," << lp.vars[j].upper << "]\n";
  }
  out << "ROWS\n";
  for (std::size_t r = 0; r < lp.rows.size(); ++r) {
    const auto& row = lp.rows[r];
    out << "  " << (row.name.empty() ? "r" + std::to_string(r) : row.name) << ":";
    for (const auto& [j, v] : row.coeffs) {
      out << " " << (v >= 0 ? "+" : "") << v << " "
          << (lp.vars[j].name.empty() ? "x" + std::to_string(j) : lp.vars[j].name);
    }
    switch (row.rel) {
      case Relation::LessEqual: out << " <= "; break;
      case Relation::GreaterEqual: out << " >= "; break;
      case Relation::Equal: out << " = "; break;
    }
    out << row.rhs << "\n";
  }
  out << "ENDATA\n";
}

}  // namespace mfnipr
