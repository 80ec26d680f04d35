#include "mfnipr/restructure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mfnipr/errors.hpp"

namespace mfnipr {

RestructureRules RestructureRules::from(const LayeredNetwork& net, double budget) {
  RestructureRules rules;
  rules.out_cap.reserve(net.nodes.size());
  rules.in_cap.reserve(net.nodes.size());
  rules.reaction.reserve(net.nodes.size());
  for (const auto& nd : net.nodes) {
    rules.out_cap.push_back(nd.l);
    rules.in_cap.push_back(nd.s);
    rules.reaction.push_back(nd.k);
  }
  rules.arc_cost.reserve(net.restructurable_arcs.size());
  rules.in_only.reserve(net.restructurable_arcs.size());
  for (const auto& a : net.restructurable_arcs) {
    rules.arc_cost.push_back(a.cost);
    const auto& head = net.nodes[a.head];
    rules.in_only.push_back(head.promotable || head.cross_org_recruitable ? 1 : 0);
  }
  rules.budget = budget;
  return rules;
}

FeasibilityReport interdiction_feasible(const LayeredNetwork& net,
                                        const InterdictionPolicy& policy,
                                        const InterdictionPlan& y) {
  FeasibilityReport report;
  double spent = 0.0;
  for (std::size_t i = 0; i < net.nodes.size(); ++i)
    if (y.interdicted[i]) spent += net.nodes[i].interdiction_cost;
  if (spent > policy.budget + 1e-9) {
    std::ostringstream os;
    os << "budget: spent " << spent << " > " << policy.budget;
    report.violations.push_back(os.str());
  }

  auto children = net.children_of();
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    if (!y.interdicted[i] || net.nodes[i].tau == 0) continue;
    int hit = 0;
    for (NodeId c : children[i]) hit += y.interdicted[c] ? 1 : 0;
    if (hit < net.nodes[i].tau) {
      std::ostringstream os;
      os << "climbing-the-ladder: node " << i << " needs " << net.nodes[i].tau
         << " interdicted children, has " << hit;
      report.violations.push_back(os.str());
    }
  }

  if (policy.leadership_on) {
    int hit = 0;
    for (NodeId i : policy.leadership_set) hit += y.interdicted[i] ? 1 : 0;
    if (hit < policy.leadership_min) {
      std::ostringstream os;
      os << "leadership: " << hit << " of required " << policy.leadership_min
         << " leadership nodes interdicted";
      report.violations.push_back(os.str());
    }
  }

  report.feasible = report.violations.empty();
  return report;
}

PermissionIndicators permissions(const LayeredNetwork& net, const InterdictionPlan& y) {
  PermissionIndicators w;
  w.w_in.assign(net.restructurable_arcs.size(), 0);
  w.w_out.assign(net.restructurable_arcs.size(), 0);

  std::vector<std::uint8_t> parent_hit(net.nodes.size(), 0);  // some base parent interdicted
  std::vector<std::uint8_t> child_hit(net.nodes.size(), 0);   // some base child interdicted
  for (const auto& a : net.arcs) {
    if (y.interdicted[a.tail]) parent_hit[a.head] = 1;
    if (y.interdicted[a.head]) child_hit[a.tail] = 1;
  }
  for (std::size_t e = 0; e < net.restructurable_arcs.size(); ++e) {
    w.w_in[e] = parent_hit[net.restructurable_arcs[e].head];
    w.w_out[e] = child_hit[net.restructurable_arcs[e].tail];
  }
  return w;
}

FeasibilityReport feasible(const LayeredNetwork& net, const RestructureRules& rules,
                           const InterdictionPlan& y, const RestructurePlan& plan) {
  FeasibilityReport report;
  const std::size_t m = net.restructurable_arcs.size();

  std::vector<int> out_used(net.nodes.size(), 0), in_used(net.nodes.size(), 0);
  double spent = 0.0;
  for (std::size_t e = 0; e < m; ++e) {
    const auto& arc = net.restructurable_arcs[e];
    if (plan.z_out[e]) out_used[arc.tail] += 1;
    if (plan.z_in[e]) in_used[arc.head] += 1;
    if (plan.active(e)) spent += rules.arc_cost[e];
  }

  std::vector<int> interdicted_children(net.nodes.size(), 0);
  std::vector<int> interdicted_parents(net.nodes.size(), 0);
  for (const auto& a : net.arcs) {
    if (y.interdicted[a.head]) interdicted_children[a.tail] += 1;
    if (y.interdicted[a.tail]) interdicted_parents[a.head] += 1;
  }

  // Families reported in the fixed order (A.4), (A.5), (A.6), (A.7), (A.8),
  // (A.9), in-only, so golden outputs stay stable.
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    if (out_used[i] > rules.out_cap[i]) {
      std::ostringstream os;
      os << "out-cap: node " << i << " restructures " << out_used[i] << " > l=" << rules.out_cap[i];
      report.violations.push_back(os.str());
    }
  }
  for (std::size_t j = 0; j < net.nodes.size(); ++j) {
    if (in_used[j] > rules.in_cap[j]) {
      std::ostringstream os;
      os << "in-cap: node " << j << " receives " << in_used[j] << " > s=" << rules.in_cap[j];
      report.violations.push_back(os.str());
    }
  }
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    const int allowed = rules.reaction[i] * interdicted_children[i];
    if (out_used[i] > allowed) {
      std::ostringstream os;
      os << "out-reaction: node " << i << " restructures " << out_used[i] << " > k*children="
         << allowed;
      report.violations.push_back(os.str());
    }
  }
  for (std::size_t j = 0; j < net.nodes.size(); ++j) {
    const int allowed = rules.reaction[j] * interdicted_parents[j];
    if (in_used[j] > allowed) {
      std::ostringstream os;
      os << "in-reaction: node " << j << " receives " << in_used[j] << " > k*parents=" << allowed;
      report.violations.push_back(os.str());
    }
  }
  for (std::size_t e = 0; e < m; ++e) {
    if (plan.z_in[e] && plan.z_out[e]) {
      std::ostringstream os;
      os << "both-sides: arc (" << net.restructurable_arcs[e].tail << ","
         << net.restructurable_arcs[e].head << ") activated via z_in and z_out";
      report.violations.push_back(os.str());
    }
  }
  if (spent > rules.budget + 1e-9) {
    std::ostringstream os;
    os << "budget: spent " << spent << " > r=" << rules.budget;
    report.violations.push_back(os.str());
  }
  for (std::size_t e = 0; e < m; ++e) {
    if (plan.z_out[e] && rules.in_only[e]) {
      std::ostringstream os;
      os << "in-only: arc (" << net.restructurable_arcs[e].tail << ","
         << net.restructurable_arcs[e].head << ") into a promotable/cross-org head used z_out";
      report.violations.push_back(os.str());
    }
  }

  report.feasible = report.violations.empty();
  return report;
}

RestructurePlan project(const RestructurePlan& bar, const PermissionIndicators& w) {
  RestructurePlan hat(bar.size());
  for (std::size_t e = 0; e < bar.size(); ++e) {
    // max{0, z + w - 1} on binaries is the conjunction.
    hat.z_in[e] = static_cast<std::uint8_t>(bar.z_in[e] && w.w_in[e]);
    hat.z_out[e] = static_cast<std::uint8_t>(bar.z_out[e] && w.w_out[e]);
  }
  return hat;
}

namespace {

enum class Side : std::uint8_t { Off, In, Out };

void enumerate_rec(const LayeredNetwork& net, const RestructureRules& rules,
                   const InterdictionPlan& y, const std::vector<std::size_t>& open,
                   std::size_t pos, RestructurePlan& current,
                   std::vector<RestructurePlan>& out, std::size_t cap) {
  if (pos == open.size()) {
    if (feasible(net, rules, y, current).feasible) {
      if (out.size() >= cap)
        throw ResourceError("enumerate_plans: plan count exceeds cap");
      out.push_back(current);
    }
    return;
  }
  const std::size_t e = open[pos];
  for (Side side : {Side::Off, Side::In, Side::Out}) {
    current.z_in[e] = side == Side::In ? 1 : 0;
    current.z_out[e] = side == Side::Out ? 1 : 0;
    enumerate_rec(net, rules, y, open, pos + 1, current, out, cap);
  }
  current.z_in[e] = 0;
  current.z_out[e] = 0;
}

}  // namespace

std::vector<RestructurePlan> enumerate_plans(const LayeredNetwork& net,
                                             const RestructureRules& rules,
                                             const InterdictionPlan& y, std::size_t cap) {
  const auto w = permissions(net, y);
  std::vector<std::size_t> open;
  for (std::size_t e = 0; e < net.restructurable_arcs.size(); ++e)
    if (w.w_in[e] || w.w_out[e]) open.push_back(e);
  if (open.size() > 20)
    throw ResourceError("enumerate_plans: too many permitted arcs to enumerate");

  std::vector<RestructurePlan> out;
  RestructurePlan current(net.restructurable_arcs.size());
  enumerate_rec(net, rules, y, open, 0, current, out, cap);
  return out;
}

namespace {

void enumerate_y_rec(const LayeredNetwork& net, const InterdictionPolicy& policy,
                     std::size_t pos, double spent, InterdictionPlan& current,
                     std::vector<InterdictionPlan>& out, std::size_t cap) {
  if (pos == net.nodes.size()) {
    if (interdiction_feasible(net, policy, current).feasible) {
      if (out.size() >= cap)
        throw ResourceError("enumerate_interdictions: plan count exceeds cap");
      out.push_back(current);
    }
    return;
  }
  current.interdicted[pos] = 0;
  enumerate_y_rec(net, policy, pos + 1, spent, current, out, cap);
  const double cost = net.nodes[pos].interdiction_cost;
  if (spent + cost <= policy.budget + 1e-9) {
    current.interdicted[pos] = 1;
    enumerate_y_rec(net, policy, pos + 1, spent + cost, current, out, cap);
    current.interdicted[pos] = 0;
  }
}

}  // namespace

std::vector<InterdictionPlan> enumerate_interdictions(const LayeredNetwork& net,
                                                      const InterdictionPolicy& policy,
                                                      std::size_t cap) {
  std::vector<InterdictionPlan> out;
  InterdictionPlan current(net.nodes.size());
  enumerate_y_rec(net, policy, 0, 0.0, current, out, cap);
  return out;
}

}  // namespace mfnipr
