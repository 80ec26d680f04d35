#include "mfnipr/ccg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>

namespace mfnipr {

const char* to_string(CcgMode m) {
  switch (m) {
    case CcgMode::PartialInfo: return "partial";
    case CcgMode::Baseline: return "baseline";
    case CcgMode::Enumerate: return "enumerate";
  }
  return "?";
}

namespace {

constexpr double kBoundGuard = 1e-9;

}  // namespace

CcgResult solve(const LayeredNetwork& net, const RestructureRules& rules,
                const InterdictionPolicy& policy, const CcgConfig& config) {
  if (config.mode == CcgMode::Enumerate)
    return solve_enumerate(net, rules, policy, config.enumeration_cap);

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  const SplitNetwork snet = split_nodes(net);
  const double granularity = capacity_granularity(net);
  const MasterFlavor flavor =
      config.mode == CcgMode::Baseline ? MasterFlavor::Baseline : MasterFlavor::PartialInfo;

  CcgResult result;
  result.y_star = InterdictionPlan(net.nodes.size());
  result.z_star = RestructurePlan(net.restructurable_arcs.size());
  result.lower = -kInf;
  result.upper = kInf;

  PlanPool pool = PlanPool::seeded(net.restructurable_arcs.size(), net.nodes.size());
  double last_iteration_seconds = 0.0;

  for (int n = 1; n <= config.max_iterations; ++n) {
    const double iter_start = elapsed();
    SolveLimits limits;
    limits.abs_gap = config.mip_abs_gap;
    limits.node_limit = config.mip_node_limit;
    limits.objective_granularity = granularity;
    limits.time_limit = std::max(0.0, config.time_limit - elapsed());

    // Step 1: master solve under the current pool.
    const MasterModel master = build_master(net, snet, rules, policy, pool, flavor);
    const MipCallbacks mcb = master_callbacks(master, net, snet, policy, pool, flavor);
    limits.branch_weight = master_branch_weights(master, net);
    const MipSolution msol = solve_mip(master.mip, limits, mcb);
    const double master_seconds = elapsed() - iter_start;
    result.iterations = n;

    if (msol.status == SolveStatus::Infeasible)
      throw ValidationError("ccg: master infeasible; the interdiction policy admits no plan");
    if (msol.status == SolveStatus::LimitReached) {
      result.lower = std::max(result.lower, msol.bound);
      result.log.push_back({n, result.lower, std::nullopt, master_seconds, 0.0, pool.size()});
      result.status = SolveStatus::LimitReached;
      break;
    }

    result.lower = msol.objective;
    if (result.upper - result.lower <= config.epsilon + kBoundGuard) {
      result.log.push_back({n, result.lower, std::nullopt, master_seconds, 0.0, pool.size()});
      result.status = SolveStatus::Optimal;
      break;
    }

    // Step 2: exact recourse at y^n.
    const InterdictionPlan y_n = extract_interdiction(master.layout, msol, net.nodes.size());
    const double sub_start = elapsed();
    limits.time_limit = std::max(0.0, config.time_limit - elapsed());
    const SubproblemModel sub = build_subproblem(net, snet, rules, y_n);
    const MipCallbacks scb = subproblem_callbacks(sub, net, snet, rules, y_n);
    limits.branch_weight.clear();
    const MipSolution ssol = solve_mip(sub.mip, limits, scb);
    const double sub_seconds = elapsed() - sub_start;

    if (ssol.status != SolveStatus::Optimal) {
      // Without a proven best response the upper bound cannot move.
      result.log.push_back({n, result.lower, std::nullopt, master_seconds, sub_seconds,
                            pool.size()});
      result.status = SolveStatus::LimitReached;
      break;
    }

    const RestructurePlan z_next = extract_plan(sub, ssol);
    const double eta_hat = max_flow(snet, y_n, z_next).value;  // exact incumbent value
    if (eta_hat < result.upper - kBoundGuard) {
      result.upper = eta_hat;
      result.y_star = y_n;
      result.z_star = z_next;
    }

    // Step 3: grow the pool.
    pool.append(z_next, n, y_n);
    result.plans_visited = n;
    result.log.push_back({n, result.lower, eta_hat, master_seconds, sub_seconds, pool.size()});

    last_iteration_seconds = elapsed() - iter_start;
    if (elapsed() + last_iteration_seconds >= config.time_limit) {
      // §4 stop rule: do not start an iteration expected to blow the limit.
      result.status = SolveStatus::LimitReached;
      break;
    }
  }

  result.wall_seconds = elapsed();
  return result;
}

namespace {

// Streaming walk over Y with budget pruning; the shared work counter covers
// both walk leaves and inner plan enumerations, so oversized calls fail fast
// instead of materializing millions of plans.
struct EnumerationWalk {
  const LayeredNetwork& net;
  const InterdictionPolicy& policy;
  const std::vector<std::vector<NodeId>> children;
  std::size_t work = 0;
  std::size_t cap;
  std::function<void(const InterdictionPlan&)> fn;

  EnumerationWalk(const LayeredNetwork& n, const InterdictionPolicy& p, std::size_t c)
      : net(n), policy(p), children(n.children_of()), cap(c) {}

  bool leaf_feasible(const InterdictionPlan& y) const {
    for (std::size_t i = 0; i < net.nodes.size(); ++i) {
      if (!y.interdicted[i] || net.nodes[i].tau == 0) continue;
      int hit = 0;
      for (NodeId c : children[i]) hit += y.interdicted[c];
      if (hit < net.nodes[i].tau) return false;
    }
    if (policy.leadership_on) {
      int hit = 0;
      for (NodeId i : policy.leadership_set) hit += y.interdicted[i];
      if (hit < policy.leadership_min) return false;
    }
    return true;
  }

  void run(std::size_t pos, double spent, InterdictionPlan& current) {
    if (pos == net.nodes.size()) {
      if (++work > cap)
        throw ResourceError("solve_enumerate: interdiction-plan walk exceeds cap");
      if (leaf_feasible(current)) {
        work += 64;  // a feasible leaf costs a plan enumeration, not one visit
        fn(current);
      }
      return;
    }
    current.interdicted[pos] = 0;
    run(pos + 1, spent, current);
    const double cost = net.nodes[pos].interdiction_cost;
    if (spent + cost <= policy.budget + 1e-9) {
      current.interdicted[pos] = 1;
      run(pos + 1, spent + cost, current);
      current.interdicted[pos] = 0;
    }
  }
};

}  // namespace

CcgResult solve_enumerate(const LayeredNetwork& net, const RestructureRules& rules,
                          const InterdictionPolicy& policy, std::size_t cap) {
  const auto t0 = std::chrono::steady_clock::now();
  const SplitNetwork snet = split_nodes(net);

  CcgResult result;
  result.y_star = InterdictionPlan(net.nodes.size());
  result.z_star = RestructurePlan(net.restructurable_arcs.size());

  double best = kInf;
  InterdictionPlan current(net.nodes.size());
  EnumerationWalk walk(net, policy, cap);
  walk.fn = [&](const InterdictionPlan& y) {
    double inner = -kInf;
    RestructurePlan inner_best(net.restructurable_arcs.size());
    const auto plans = enumerate_plans(net, rules, y, cap);
    walk.work += plans.size();
    if (walk.work > cap)
      throw ResourceError("solve_enumerate: combined enumeration work exceeds cap");
    for (const auto& z : plans) {
      const double value = max_flow(snet, y, z).value;
      if (value > inner) {
        inner = value;
        inner_best = z;
      }
    }
    if (inner < best - kBoundGuard) {
      best = inner;
      result.y_star = y;
      result.z_star = inner_best;
    }
  };
  walk.run(0, 0.0, current);
  if (!std::isfinite(best))
    throw ValidationError("solve_enumerate: the interdiction policy admits no plan");

  result.lower = best;
  result.upper = best;
  result.status = SolveStatus::Optimal;
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

double evaluate_after_plan(const LayeredNetwork& net, const RestructureRules& rules,
                           const InterdictionPlan& y_fixed, const CcgConfig& config) {
  const SplitNetwork snet = split_nodes(net);
  const SubproblemModel sub = build_subproblem(net, snet, rules, y_fixed);
  const MipCallbacks cb = subproblem_callbacks(sub, net, snet, rules, y_fixed);
  SolveLimits limits;
  limits.abs_gap = config.mip_abs_gap;
  limits.node_limit = config.mip_node_limit;
  limits.objective_granularity = capacity_granularity(net);
  limits.time_limit = config.time_limit;
  const MipSolution sol = solve_mip(sub.mip, limits, cb);
  if (sol.status != SolveStatus::Optimal && sol.x.empty())
    throw ValidationError("evaluate_after_plan: recourse solve produced no plan");
  return max_flow(snet, y_fixed, extract_plan(sub, sol)).value;
}

}  // namespace mfnipr
