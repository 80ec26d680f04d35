#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace mfnipr::testsupport {

PartitionCut min_cut_partitions(const SplitNetwork& snet, const InterdictionPlan& y,
                                const RestructurePlan& z) {
  const int n = snet.num_nodes;
  const int free_nodes = n - 2;
  if (free_nodes > 22) throw std::runtime_error("partition oracle: network too large");

  // Map free node index -> node id (terminals excluded; s always in U, t out).
  std::vector<int> ids;
  for (int v = 0; v < n; ++v)
    if (v != snet.source && v != snet.sink) ids.push_back(v);

  std::vector<double> cap(snet.arcs.size());
  for (std::size_t a = 0; a < snet.arcs.size(); ++a) cap[a] = effective_capacity(snet, a, y, z);

  double best = kInf;
  std::vector<std::vector<std::uint8_t>> argmins;
  std::vector<std::uint8_t> side(n, 0);
  for (std::uint64_t mask = 0; mask < (1ULL << free_nodes); ++mask) {
    std::fill(side.begin(), side.end(), 0);
    side[snet.source] = 1;
    for (int b = 0; b < free_nodes; ++b)
      if (mask & (1ULL << b)) side[ids[b]] = 1;
    double value = 0.0;
    for (std::size_t a = 0; a < snet.arcs.size(); ++a) {
      if (side[snet.arcs[a].tail] && !side[snet.arcs[a].head]) value += cap[a];
      if (value > best + 1e-9) break;
    }
    if (value < best - 1e-9) {
      best = value;
      argmins.clear();
      argmins.push_back(side);
    } else if (value <= best + 1e-9) {
      argmins.push_back(side);
    }
  }

  PartitionCut out;
  out.value = best;
  out.minimal_source_side.assign(n, 1);
  for (const auto& s : argmins)
    for (int v = 0; v < n; ++v) out.minimal_source_side[v] &= s[v];
  return out;
}

double bilevel_bruteforce(const LayeredNetwork& net, const RestructureRules& rules,
                          const InterdictionPolicy& policy, std::size_t cap) {
  const SplitNetwork snet = split_nodes(net);
  double best = kInf;
  for (const auto& y : enumerate_interdictions(net, policy, cap)) {
    double inner = 0.0;
    for (const auto& z : enumerate_plans(net, rules, y, cap))
      inner = std::max(inner, max_flow(snet, y, z).value);
    best = std::min(best, inner);
  }
  return best;
}

namespace {

// Solves square system M x = rhs by Gaussian elimination; false if singular.
bool solve_square(std::vector<std::vector<double>> M, std::vector<double> rhs,
                  std::vector<double>& x) {
  const int n = static_cast<int>(rhs.size());
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    double best = 1e-9;
    for (int r = col; r < n; ++r)
      if (std::abs(M[r][col]) > best) { best = std::abs(M[r][col]); piv = r; }
    if (piv < 0) return false;
    std::swap(M[piv], M[col]);
    std::swap(rhs[piv], rhs[col]);
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = M[r][col] / M[col][col];
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) M[r][c] -= f * M[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  x.resize(n);
  for (int i = 0; i < n; ++i) x[i] = rhs[i] / M[i][i];
  return true;
}

struct Hyperplane {
  std::vector<double> coeffs;
  double rhs;
};

}  // namespace

double lp_vertex_oracle(const LinearProgram& lp) {
  const int n = static_cast<int>(lp.vars.size());
  std::vector<Hyperplane> planes;
  for (const auto& row : lp.rows) {
    Hyperplane h{std::vector<double>(n, 0.0), row.rhs};
    for (const auto& [j, v] : row.coeffs) h.coeffs[j] += v;
    planes.push_back(std::move(h));
  }
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(lp.vars[j].lower)) {
      Hyperplane h{std::vector<double>(n, 0.0), lp.vars[j].lower};
      h.coeffs[j] = 1.0;
      planes.push_back(std::move(h));
    }
    if (std::isfinite(lp.vars[j].upper)) {
      Hyperplane h{std::vector<double>(n, 0.0), lp.vars[j].upper};
      h.coeffs[j] = 1.0;
      planes.push_back(std::move(h));
    }
  }

  auto feasible = [&](const std::vector<double>& x) {
    for (int j = 0; j < n; ++j)
      if (x[j] < lp.vars[j].lower - 1e-7 || x[j] > lp.vars[j].upper + 1e-7) return false;
    for (const auto& row : lp.rows) {
      double act = 0.0;
      for (const auto& [j, v] : row.coeffs) act += v * x[j];
      switch (row.rel) {
        case Relation::LessEqual: if (act > row.rhs + 1e-7) return false; break;
        case Relation::GreaterEqual: if (act < row.rhs - 1e-7) return false; break;
        case Relation::Equal: if (std::abs(act - row.rhs) > 1e-7) return false; break;
      }
    }
    return true;
  };

  const bool maximize = lp.sense == Sense::Maximize;
  double best = maximize ? -kInf : kInf;
  std::vector<int> pick(n);
  std::vector<double> x;

  // All choose(|planes|, n) active sets.
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == n) {
      std::vector<std::vector<double>> M(n);
      std::vector<double> rhs(n);
      for (int i = 0; i < n; ++i) {
        M[i] = planes[pick[i]].coeffs;
        rhs[i] = planes[pick[i]].rhs;
      }
      if (!solve_square(std::move(M), std::move(rhs), x)) return;
      if (!feasible(x)) return;
      double obj = 0.0;
      for (int j = 0; j < n; ++j) obj += lp.objective[j] * x[j];
      best = maximize ? std::max(best, obj) : std::min(best, obj);
      return;
    }
    for (int p = start; p < static_cast<int>(planes.size()); ++p) {
      pick[depth] = p;
      rec(p + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

double binary_enumeration_oracle(const MixedIntegerProgram& mip, bool* feasible_out) {
  const LinearProgram& lp = mip.lp;
  const int n = static_cast<int>(lp.vars.size());
  for (int j = 0; j < n; ++j)
    if (!(j < static_cast<int>(mip.integral.size()) && mip.integral[j]))
      throw std::runtime_error("binary oracle: continuous variable present");
  if (n > 22) throw std::runtime_error("binary oracle: too many variables");

  const bool maximize = lp.sense == Sense::Maximize;
  double best = maximize ? -kInf : kInf;
  bool any = false;
  std::vector<double> x(n);
  for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
    bool in_bounds = true;
    for (int j = 0; j < n; ++j) {
      x[j] = (mask >> j) & 1 ? 1.0 : 0.0;
      if (x[j] < lp.vars[j].lower - 1e-9 || x[j] > lp.vars[j].upper + 1e-9) in_bounds = false;
    }
    if (!in_bounds) continue;
    bool ok = true;
    for (const auto& row : lp.rows) {
      double act = 0.0;
      for (const auto& [j, v] : row.coeffs) act += v * x[j];
      if (row.rel == Relation::LessEqual && act > row.rhs + 1e-9) ok = false;
      if (row.rel == Relation::GreaterEqual && act < row.rhs - 1e-9) ok = false;
      if (row.rel == Relation::Equal && std::abs(act - row.rhs) > 1e-9) ok = false;
      if (!ok) break;
    }
    if (!ok) continue;
    any = true;
    double obj = 0.0;
    for (int j = 0; j < n; ++j) obj += lp.objective[j] * x[j];
    best = maximize ? std::max(best, obj) : std::min(best, obj);
  }
  if (feasible_out) *feasible_out = any;
  return best;
}

LinearProgram dualize(const LinearProgram& lp) {
  if (lp.sense != Sense::Minimize)
    throw std::runtime_error("dualize: expects a minimization program");
  const int m = static_cast<int>(lp.rows.size());
  const int n = static_cast<int>(lp.vars.size());

  LinearProgram dual;
  dual.sense = Sense::Maximize;
  std::vector<int> yvar(m), lvar(n, -1), uvar(n, -1);
  for (int i = 0; i < m; ++i) {
    switch (lp.rows[i].rel) {
      case Relation::GreaterEqual: yvar[i] = dual.add_var(0.0, kInf, lp.rows[i].rhs); break;
      case Relation::LessEqual: yvar[i] = dual.add_var(-kInf, 0.0, lp.rows[i].rhs); break;
      case Relation::Equal:
        throw std::runtime_error("dualize: equality rows unsupported here");
    }
  }
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(lp.vars[j].lower))
      lvar[j] = dual.add_var(0.0, kInf, lp.vars[j].lower);
    if (std::isfinite(lp.vars[j].upper))
      uvar[j] = dual.add_var(-kInf, 0.0, lp.vars[j].upper);
  }
  // Stationarity: A'y + lambda + mu = c.
  std::vector<std::vector<std::pair<int, double>>> cols(n);
  for (int i = 0; i < m; ++i)
    for (const auto& [j, v] : lp.rows[i].coeffs) cols[j].push_back({yvar[i], v});
  for (int j = 0; j < n; ++j) {
    auto coeffs = cols[j];
    if (lvar[j] >= 0) coeffs.push_back({lvar[j], 1.0});
    if (uvar[j] >= 0) coeffs.push_back({uvar[j], 1.0});
    dual.add_row(std::move(coeffs), Relation::Equal, lp.objective[j]);
  }
  return dual;
}

}  // namespace mfnipr::testsupport
