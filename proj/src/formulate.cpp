#include "mfnipr/formulate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mfnipr {

PlanPool PlanPool::seeded(std::size_t num_restructurable, std::size_t num_nodes) {
  PlanPool pool;
  pool.entries.push_back(
      {RestructurePlan(num_restructurable), 0, InterdictionPlan(num_nodes)});
  return pool;
}

void PlanPool::append(RestructurePlan plan, int iteration, InterdictionPlan generator) {
  entries.push_back({std::move(plan), iteration, std::move(generator)});
}

namespace {

constexpr double kThetaUpper = 2.0;  // 1 + max row shift

bool keep_theta(const SplitArc& arc) {
  // Uncapacitated sentinel arcs never enter a finite cut; their rows reduce to
  // pure pi ordering constraints.
  return arc.origin == ArcOrigin::NodeSplit || arc.origin == ArcOrigin::Source ||
         arc.origin == ArcOrigin::Sink;
}

std::string tag(const char* base, int a, int b = -1) {
  std::ostringstream os;
  os << base << "[" << a;
  if (b >= 0) os << "," << b;
  os << "]";
  return os.str();
}

void add_interdiction_rows(MixedIntegerProgram& mip, const LayeredNetwork& net,
                           const InterdictionPolicy& policy, const std::vector<int>& y) {
  std::vector<std::pair<int, double>> budget;
  for (std::size_t i = 0; i < net.nodes.size(); ++i)
    if (net.nodes[i].interdiction_cost != 0.0)
      budget.push_back({y[i], net.nodes[i].interdiction_cost});
  mip.lp.add_row(std::move(budget), Relation::LessEqual, policy.budget, "budget");

  auto children = net.children_of();
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    if (net.nodes[i].tau <= 0) continue;
    std::vector<std::pair<int, double>> row{{y[i], static_cast<double>(net.nodes[i].tau)}};
    for (NodeId c : children[i]) row.push_back({y[c], -1.0});
    mip.lp.add_row(std::move(row), Relation::LessEqual, 0.0, tag("ladder", static_cast<int>(i)));
  }

  if (policy.leadership_on) {
    std::vector<std::pair<int, double>> row;
    for (NodeId i : policy.leadership_set) row.push_back({y[i], 1.0});
    mip.lp.add_row(std::move(row), Relation::GreaterEqual,
                   static_cast<double>(policy.leadership_min), "leadership");
  }
}

// Emits one dual block: pi/theta variables and the shifted cut rows for every
// non-restructurable arc. Returns the kept-theta objective terms.
MasterLayout::Block add_dual_block(MixedIntegerProgram& mip, const SplitNetwork& snet,
                                   const std::vector<int>& y, int block_id,
                                   std::vector<std::pair<int, double>>& cut_terms) {
  MasterLayout::Block block;
  const double pi_bound = snet.num_nodes;
  block.pi.assign(snet.num_nodes, -1);
  for (int v = 0; v < snet.num_nodes; ++v) {
    if (v == snet.source || v == snet.sink) continue;
    block.pi[v] = mip.lp.add_var(-pi_bound, pi_bound, 0.0, tag("pi", block_id, v));
  }
  block.theta.assign(snet.arcs.size(), -1);
  for (std::size_t a = 0; a < snet.arcs.size(); ++a) {
    if (!keep_theta(snet.arcs[a])) continue;
    block.theta[a] = mip.lp.add_var(0.0, kThetaUpper, 0.0, tag("theta", block_id, static_cast<int>(a)));
    cut_terms.push_back({block.theta[a], snet.arcs[a].capacity});
  }

  for (std::size_t a = 0; a < snet.arcs.size(); ++a) {
    const SplitArc& arc = snet.arcs[a];
    if (arc.origin == ArcOrigin::Restructurable) continue;  // plan-dependent rows
    std::vector<std::pair<int, double>> row;
    double rhs = 0.0;
    if (arc.tail == snet.source) {
      row.push_back({block.pi[arc.head], 1.0});
      rhs = 1.0;
    } else if (arc.head == snet.sink) {
      row.push_back({block.pi[arc.tail], -1.0});
    } else {
      row.push_back({block.pi[arc.head], 1.0});
      row.push_back({block.pi[arc.tail], -1.0});
    }
    if (block.theta[a] >= 0) row.push_back({block.theta[a], 1.0});
    if (arc.origin == ArcOrigin::NodeSplit) row.push_back({y[arc.origin_index], 1.0});
    mip.lp.add_row(std::move(row), Relation::GreaterEqual, rhs,
                   tag("cut", block_id, static_cast<int>(a)));
  }
  return block;
}

struct SupportEntry {
  std::size_t arc;  // A^R index
  bool out_side;
};

std::vector<SupportEntry> plan_support(const RestructurePlan& plan) {
  std::vector<SupportEntry> support;
  for (std::size_t e = 0; e < plan.size(); ++e) {
    if (plan.z_out[e]) support.push_back({e, true});
    if (plan.z_in[e]) support.push_back({e, false});
  }
  return support;
}

MasterModel build_master_impl(const LayeredNetwork& net, const SplitNetwork& snet,
                              const InterdictionPolicy& policy, const PlanPool& pool,
                              MasterFlavor flavor, bool mfnip_form) {
  MasterModel model;
  MixedIntegerProgram& mip = model.mip;
  mip.lp.sense = Sense::Minimize;

  MasterLayout& layout = model.layout;
  layout.y.resize(net.nodes.size());
  for (std::size_t i = 0; i < net.nodes.size(); ++i)
    layout.y[i] = mip.add_binary(0.0, tag("y", static_cast<int>(i)));
  add_interdiction_rows(mip, net, policy, layout.y);

  double eta_upper = 0.0;
  for (const auto& nd : net.nodes) eta_upper += nd.supply;
  if (!mfnip_form)
    layout.eta = mip.lp.add_var(0.0, eta_upper, 1.0, "eta");

  layout.w_in.assign(net.restructurable_arcs.size(), -1);
  layout.w_out.assign(net.restructurable_arcs.size(), -1);

  auto parents = net.parents_of();
  auto children = net.children_of();
  auto ensure_w = [&](std::size_t e, bool out_side) {
    std::vector<int>& store = out_side ? layout.w_out : layout.w_in;
    if (store[e] >= 0) return store[e];
    store[e] = mip.add_binary(0.0, tag(out_side ? "w_out" : "w_in", static_cast<int>(e)));
    // Exact-degree Big-M row forcing the permission on when a neighbor falls.
    const auto& arc = net.restructurable_arcs[e];
    const auto& neighbors = out_side ? children[arc.tail] : parents[arc.head];
    std::vector<std::pair<int, double>> row{{store[e], static_cast<double>(neighbors.size())}};
    for (NodeId h : neighbors) row.push_back({layout.y[h], -1.0});
    mip.lp.add_row(std::move(row), Relation::GreaterEqual, 0.0,
                   tag(out_side ? "permit_out" : "permit_in", static_cast<int>(e)));
    return store[e];
  };

  // One block per distinct pool plan; duplicates add nothing to the model.
  std::vector<const RestructurePlan*> emitted;
  for (std::size_t k = 0; k < pool.entries.size(); ++k) {
    const RestructurePlan& plan = pool.entries[k].plan;
    bool duplicate = false;
    for (const auto* past : emitted)
      if (*past == plan) { duplicate = true; break; }
    if (duplicate) continue;
    emitted.push_back(&plan);

    std::vector<std::pair<int, double>> cut_terms;
    MasterLayout::Block block =
        add_dual_block(mip, snet, layout.y, static_cast<int>(k), cut_terms);
    block.pool_index = static_cast<int>(k);

    if (mfnip_form) {
      for (const auto& [var, cap] : cut_terms) mip.lp.objective[var] = cap;
      layout.blocks.push_back(std::move(block));
      break;  // MFNIP prices only the null plan
    }

    // eta >= sum u theta^k.
    std::vector<std::pair<int, double>> eta_row{{layout.eta, 1.0}};
    for (const auto& [var, cap] : cut_terms) eta_row.push_back({var, -cap});
    mip.lp.add_row(std::move(eta_row), Relation::GreaterEqual, 0.0,
                   tag("price", static_cast<int>(k)));

    const auto support = plan_support(plan);
    int f_var = -1;
    if (flavor == MasterFlavor::Baseline && !support.empty()) {
      f_var = mip.add_binary(0.0, tag("f", static_cast<int>(k)));
      layout.f.resize(layout.blocks.size() + 1, -1);
      layout.f.back() = f_var;
      // f^k >= sum w - |support| + 1.
      std::vector<std::pair<int, double>> count{{f_var, 1.0}};
      for (const auto& s : support) count.push_back({ensure_w(s.arc, s.out_side), -1.0});
      mip.lp.add_row(std::move(count), Relation::GreaterEqual,
                     1.0 - static_cast<double>(support.size()),
                     tag("count", static_cast<int>(k)));
    } else if (flavor == MasterFlavor::Baseline) {
      layout.f.resize(layout.blocks.size() + 1, -1);
    }

    if (flavor == MasterFlavor::PartialInfo) {
      for (const auto& s : support) {
        const auto& arc = net.restructurable_arcs[s.arc];
        const int w = ensure_w(s.arc, s.out_side);
        // pi_j' - pi_i'' - w >= z - 2 with z = 1 on the support.
        std::vector<std::pair<int, double>> row{
            {block.pi[SplitNetwork::in_node(arc.head)], 1.0},
            {block.pi[SplitNetwork::out_node(arc.tail)], -1.0},
            {w, -1.0}};
        mip.lp.add_row(std::move(row), Relation::GreaterEqual, -1.0,
                       tag(s.out_side ? "proj_out" : "proj_in", static_cast<int>(k),
                           static_cast<int>(s.arc)));
      }
    } else {
      // Baseline: the whole plan hinges on f^k; one row per active arc.
      std::vector<std::uint8_t> seen(net.restructurable_arcs.size(), 0);
      for (const auto& s : support) {
        if (seen[s.arc]) continue;
        seen[s.arc] = 1;
        const auto& arc = net.restructurable_arcs[s.arc];
        std::vector<std::pair<int, double>> row{
            {block.pi[SplitNetwork::in_node(arc.head)], 1.0},
            {block.pi[SplitNetwork::out_node(arc.tail)], -1.0},
            {f_var, -1.0}};
        mip.lp.add_row(std::move(row), Relation::GreaterEqual, -1.0,
                       tag("plan", static_cast<int>(k), static_cast<int>(s.arc)));
      }
    }
    layout.blocks.push_back(std::move(block));
  }
  return model;
}

}  // namespace

MasterModel build_mfnip(const LayeredNetwork& net, const SplitNetwork& snet,
                        const InterdictionPolicy& policy) {
  PlanPool pool = PlanPool::seeded(net.restructurable_arcs.size(), net.nodes.size());
  return build_master_impl(net, snet, policy, pool, MasterFlavor::PartialInfo, true);
}

MasterModel build_master(const LayeredNetwork& net, const SplitNetwork& snet,
                         const RestructureRules& rules, const InterdictionPolicy& policy,
                         const PlanPool& pool, MasterFlavor flavor) {
  (void)rules;  // Z(y) constraints live in the subproblem; the master sees plans as data
  return build_master_impl(net, snet, policy, pool, flavor, false);
}

namespace {

// Rounds the LP point into a feasible interdiction plan, or nothing.
std::optional<InterdictionPlan> repair_interdiction(const LayeredNetwork& net,
                                                    const InterdictionPolicy& policy,
                                                    const MasterLayout& layout,
                                                    std::span<const double> x) {
  InterdictionPlan y(net.nodes.size());
  for (std::size_t i = 0; i < net.nodes.size(); ++i)
    y.interdicted[i] = x[layout.y[i]] >= 0.5 ? 1 : 0;

  auto children = net.children_of();
  auto ladder_sweep = [&] {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < net.nodes.size(); ++i) {
        if (!y.interdicted[i] || net.nodes[i].tau == 0) continue;
        int hit = 0;
        for (NodeId c : children[i]) hit += y.interdicted[c];
        if (hit < net.nodes[i].tau) {
          y.interdicted[i] = 0;
          changed = true;
        }
      }
    }
  };
  ladder_sweep();

  auto spent = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < net.nodes.size(); ++i)
      if (y.interdicted[i]) s += net.nodes[i].interdiction_cost;
    return s;
  };
  while (spent() > policy.budget + 1e-9) {
    int drop = -1;
    double drop_key = kInf;
    for (std::size_t i = 0; i < net.nodes.size(); ++i) {
      if (!y.interdicted[i]) continue;
      const double key = x[layout.y[i]] - 1e-6 * net.nodes[i].interdiction_cost;
      if (key < drop_key) {
        drop_key = key;
        drop = static_cast<int>(i);
      }
    }
    if (drop < 0) return std::nullopt;
    y.interdicted[drop] = 0;
    ladder_sweep();
  }

  if (policy.leadership_on) {
    auto count = [&] {
      int c = 0;
      for (NodeId i : policy.leadership_set) c += y.interdicted[i];
      return c;
    };
    // Add affordable leadership nodes whose ladder prerequisite already holds.
    bool progress = true;
    while (count() < policy.leadership_min && progress) {
      progress = false;
      int pick = -1;
      double pick_cost = kInf;
      for (NodeId i : policy.leadership_set) {
        if (y.interdicted[i]) continue;
        int hit = 0;
        for (NodeId c : children[i]) hit += y.interdicted[c];
        if (hit < net.nodes[i].tau) continue;
        if (spent() + net.nodes[i].interdiction_cost > policy.budget + 1e-9) continue;
        if (net.nodes[i].interdiction_cost < pick_cost) {
          pick_cost = net.nodes[i].interdiction_cost;
          pick = i;
        }
      }
      if (pick >= 0) {
        y.interdicted[pick] = 1;
        progress = true;
      }
    }
    if (count() < policy.leadership_min) return std::nullopt;
  }

  if (!interdiction_feasible(net, policy, y).feasible) return std::nullopt;
  return y;
}

}  // namespace

MipCallbacks master_callbacks(const MasterModel& model, const LayeredNetwork& net,
                              const SplitNetwork& snet, const InterdictionPolicy& policy,
                              const PlanPool& pool, MasterFlavor flavor) {
  MipCallbacks cb;
  const MasterLayout& layout = model.layout;
  const std::size_t nvars = model.mip.lp.vars.size();
  const bool mfnip_form = layout.eta < 0;

  cb.candidate = [&net, &snet, &policy, &pool, layout, nvars, flavor, mfnip_form,
                  cache = InterdictionPlan{}](
                     std::span<const double> x) mutable -> std::optional<std::vector<double>> {
    auto maybe_y = repair_interdiction(net, policy, layout, x);
    if (!maybe_y) return std::nullopt;
    const InterdictionPlan& y = *maybe_y;
    if (y == cache) return std::nullopt;  // already priced this rounding
    cache = y;
    const PermissionIndicators w = permissions(net, y);

    std::vector<double> cand(nvars, 0.0);
    for (std::size_t i = 0; i < net.nodes.size(); ++i)
      cand[layout.y[i]] = y.interdicted[i] ? 1.0 : 0.0;
    for (std::size_t e = 0; e < w.w_in.size(); ++e) {
      if (layout.w_in[e] >= 0) cand[layout.w_in[e]] = w.w_in[e] ? 1.0 : 0.0;
      if (layout.w_out[e] >= 0) cand[layout.w_out[e]] = w.w_out[e] ? 1.0 : 0.0;
    }

    double eta = 0.0;
    for (std::size_t b = 0; b < layout.blocks.size(); ++b) {
      const MasterLayout::Block& block = layout.blocks[b];
      const RestructurePlan& bar = pool.entries[block.pool_index].plan;

      RestructurePlan hat(bar.size());
      bool fully_permitted = true;
      for (std::size_t e = 0; e < bar.size(); ++e) {
        if (bar.z_out[e] && !w.w_out[e]) fully_permitted = false;
        if (bar.z_in[e] && !w.w_in[e]) fully_permitted = false;
      }
      if (flavor == MasterFlavor::PartialInfo) {
        hat = project(bar, w);
      } else if (fully_permitted) {
        hat = bar;
      }
      if (flavor == MasterFlavor::Baseline && b < layout.f.size() && layout.f[b] >= 0)
        cand[layout.f[b]] = fully_permitted ? 1.0 : 0.0;

      const FlowAssignment flow = max_flow(snet, y, hat);
      const CutSolution cut = min_cut(snet, y, hat, flow);
      eta = std::max(eta, flow.value);

      for (int v = 0; v < snet.num_nodes; ++v)
        if (block.pi[v] >= 0) cand[block.pi[v]] = cut.source_side[v] ? 1.0 : 0.0;
      for (std::size_t a = 0; a < snet.arcs.size(); ++a) {
        if (block.theta[a] < 0) continue;
        const SplitArc& arc = snet.arcs[a];
        const bool crossing = cut.source_side[arc.tail] && !cut.source_side[arc.head];
        const bool interdicted =
            arc.origin == ArcOrigin::NodeSplit && y.interdicted[arc.origin_index];
        cand[block.theta[a]] = (crossing && !interdicted) ? 1.0 : 0.0;
      }
    }
    if (!mfnip_form) cand[layout.eta] = eta;
    return cand;
  };
  return cb;
}

std::vector<double> master_branch_weights(const MasterModel& model, const LayeredNetwork& net) {
  std::vector<double> weights(model.mip.lp.vars.size(), 1.0);
  for (std::size_t i = 0; i < net.nodes.size(); ++i)
    weights[model.layout.y[i]] = std::max(1.0, net.nodes[i].capacity);
  return weights;
}

InterdictionPlan extract_interdiction(const MasterLayout& layout, const MipSolution& sol,
                                      std::size_t num_nodes) {
  InterdictionPlan y(num_nodes);
  for (std::size_t i = 0; i < num_nodes; ++i)
    y.interdicted[i] = sol.x[layout.y[i]] >= 0.5 ? 1 : 0;
  return y;
}

SubproblemModel build_subproblem(const LayeredNetwork& net, const SplitNetwork& snet,
                                 const RestructureRules& rules, const InterdictionPlan& y_hat) {
  SubproblemModel model;
  MixedIntegerProgram& mip = model.mip;
  mip.lp.sense = Sense::Maximize;
  SubproblemLayout& layout = model.layout;

  const RestructurePlan no_plan(net.restructurable_arcs.size());
  layout.flow.assign(snet.arcs.size(), -1);
  for (std::size_t a = 0; a < snet.arcs.size(); ++a) {
    const SplitArc& arc = snet.arcs[a];
    double ub;
    if (arc.origin == ArcOrigin::Restructurable)
      ub = std::min(net.nodes[net.restructurable_arcs[arc.origin_index].tail].capacity,
                    net.nodes[net.restructurable_arcs[arc.origin_index].head].capacity);
    else
      ub = effective_capacity(snet, a, y_hat, no_plan);
    layout.flow[a] = mip.lp.add_var(0.0, ub, 0.0, tag("x", static_cast<int>(a)));
  }
  layout.return_flow = mip.lp.add_var(0.0, kInf, 1.0, "x_ts");

  const PermissionIndicators w = permissions(net, y_hat);
  layout.z_in.assign(net.restructurable_arcs.size(), -1);
  layout.z_out.assign(net.restructurable_arcs.size(), -1);
  for (std::size_t e = 0; e < net.restructurable_arcs.size(); ++e) {
    layout.z_in[e] = mip.add_binary(0.0, tag("z_in", static_cast<int>(e)));
    layout.z_out[e] = mip.add_binary(0.0, tag("z_out", static_cast<int>(e)));
    // Sides the local-reaction rules already rule out are pinned.
    if (!w.w_in[e]) mip.lp.vars[layout.z_in[e]].upper = 0.0;
    if (!w.w_out[e] || rules.in_only[e]) mip.lp.vars[layout.z_out[e]].upper = 0.0;
  }

  // Flow balance everywhere; the return arc closes t back to s.
  std::vector<std::vector<std::pair<int, double>>> balance(snet.num_nodes);
  for (std::size_t a = 0; a < snet.arcs.size(); ++a) {
    balance[snet.arcs[a].tail].push_back({layout.flow[a], 1.0});
    balance[snet.arcs[a].head].push_back({layout.flow[a], -1.0});
  }
  balance[snet.sink].push_back({layout.return_flow, 1.0});
  balance[snet.source].push_back({layout.return_flow, -1.0});
  for (int v = 0; v < snet.num_nodes; ++v)
    mip.lp.add_row(std::move(balance[v]), Relation::Equal, 0.0, tag("balance", v));

  // Restructured capacity: x_e <= u_e (z_in + z_out).
  for (std::size_t e = 0; e < net.restructurable_arcs.size(); ++e) {
    const int a = snet.arc_of_restructurable[e];
    const double u = mip.lp.vars[layout.flow[a]].upper;
    mip.lp.add_row({{layout.flow[a], 1.0}, {layout.z_in[e], -u}, {layout.z_out[e], -u}},
                   Relation::LessEqual, 0.0, tag("activate", static_cast<int>(e)));
  }

  // Z(y-hat) rows (A.4)-(A.9).
  std::vector<std::vector<std::size_t>> out_arcs(net.nodes.size()), in_arcs(net.nodes.size());
  for (std::size_t e = 0; e < net.restructurable_arcs.size(); ++e) {
    out_arcs[net.restructurable_arcs[e].tail].push_back(e);
    in_arcs[net.restructurable_arcs[e].head].push_back(e);
  }
  std::vector<int> interdicted_children(net.nodes.size(), 0), interdicted_parents(net.nodes.size(), 0);
  for (const auto& a : net.arcs) {
    if (y_hat.interdicted[a.head]) interdicted_children[a.tail] += 1;
    if (y_hat.interdicted[a.tail]) interdicted_parents[a.head] += 1;
  }
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    if (out_arcs[i].empty()) continue;
    std::vector<std::pair<int, double>> row;
    for (std::size_t e : out_arcs[i]) row.push_back({layout.z_out[e], 1.0});
    auto copy = row;
    mip.lp.add_row(std::move(copy), Relation::LessEqual,
                   static_cast<double>(rules.out_cap[i]), tag("out_cap", static_cast<int>(i)));
    mip.lp.add_row(std::move(row), Relation::LessEqual,
                   static_cast<double>(rules.reaction[i] * interdicted_children[i]),
                   tag("out_react", static_cast<int>(i)));
  }
  for (std::size_t j = 0; j < net.nodes.size(); ++j) {
    if (in_arcs[j].empty()) continue;
    std::vector<std::pair<int, double>> row;
    for (std::size_t e : in_arcs[j]) row.push_back({layout.z_in[e], 1.0});
    auto copy = row;
    mip.lp.add_row(std::move(copy), Relation::LessEqual,
                   static_cast<double>(rules.in_cap[j]), tag("in_cap", static_cast<int>(j)));
    mip.lp.add_row(std::move(row), Relation::LessEqual,
                   static_cast<double>(rules.reaction[j] * interdicted_parents[j]),
                   tag("in_react", static_cast<int>(j)));
  }
  for (std::size_t e = 0; e < net.restructurable_arcs.size(); ++e)
    mip.lp.add_row({{layout.z_in[e], 1.0}, {layout.z_out[e], 1.0}}, Relation::LessEqual, 1.0,
                   tag("one_side", static_cast<int>(e)));
  std::vector<std::pair<int, double>> budget_row;
  for (std::size_t e = 0; e < net.restructurable_arcs.size(); ++e) {
    budget_row.push_back({layout.z_in[e], rules.arc_cost[e]});
    budget_row.push_back({layout.z_out[e], rules.arc_cost[e]});
  }
  mip.lp.add_row(std::move(budget_row), Relation::LessEqual, rules.budget, "restructure_budget");
  return model;
}

RestructurePlan extract_plan(const SubproblemModel& model, const MipSolution& sol) {
  RestructurePlan plan(model.layout.z_in.size());
  for (std::size_t e = 0; e < plan.size(); ++e) {
    plan.z_in[e] = sol.x[model.layout.z_in[e]] >= 0.5 ? 1 : 0;
    plan.z_out[e] = sol.x[model.layout.z_out[e]] >= 0.5 ? 1 : 0;
  }
  return plan;
}

MipCallbacks subproblem_callbacks(const SubproblemModel& model, const LayeredNetwork& net,
                                  const SplitNetwork& snet, const RestructureRules& rules,
                                  const InterdictionPlan& y_hat) {
  MipCallbacks cb;
  const SubproblemLayout layout = model.layout;
  const std::size_t nvars = model.mip.lp.vars.size();

  cb.candidate = [&net, &snet, &rules, &y_hat, layout, nvars, cache = RestructurePlan{}](
                     std::span<const double> x) mutable -> std::optional<std::vector<double>> {
    RestructurePlan plan(net.restructurable_arcs.size());
    for (std::size_t e = 0; e < plan.size(); ++e) {
      const double vin = x[layout.z_in[e]], vout = x[layout.z_out[e]];
      if (vin >= 0.5 && vin >= vout) plan.z_in[e] = 1;
      else if (vout >= 0.5) plan.z_out[e] = 1;
    }
    // Greedy repair: drop the least-wanted active coordinate until feasible.
    while (!feasible(net, rules, y_hat, plan).feasible) {
      int drop = -1;
      bool drop_in = false;
      double key = kInf;
      for (std::size_t e = 0; e < plan.size(); ++e) {
        if (plan.z_in[e] && x[layout.z_in[e]] < key) {
          key = x[layout.z_in[e]];
          drop = static_cast<int>(e);
          drop_in = true;
        }
        if (plan.z_out[e] && x[layout.z_out[e]] < key) {
          key = x[layout.z_out[e]];
          drop = static_cast<int>(e);
          drop_in = false;
        }
      }
      if (drop < 0) return std::nullopt;
      (drop_in ? plan.z_in : plan.z_out)[drop] = 0;
    }
    if (plan == cache) return std::nullopt;
    cache = plan;

    const FlowAssignment flow = max_flow(snet, y_hat, plan);
    std::vector<double> cand(nvars, 0.0);
    for (std::size_t a = 0; a < snet.arcs.size(); ++a) cand[layout.flow[a]] = flow.flow[a];
    cand[layout.return_flow] = flow.value;
    for (std::size_t e = 0; e < plan.size(); ++e) {
      cand[layout.z_in[e]] = plan.z_in[e];
      cand[layout.z_out[e]] = plan.z_out[e];
    }
    return cand;
  };
  return cb;
}

namespace {

// Eq. (2)-style LP: unshifted rows, capacity-weighted objective.
LinearProgram build_capacity_weighted(const LayeredNetwork& net, const SplitNetwork& snet,
                                      const InterdictionPlan& y, const RestructurePlan& z) {
  LinearProgram lp;
  lp.sense = Sense::Minimize;
  const double pi_bound = snet.num_nodes;
  std::vector<int> pi(snet.num_nodes, -1);
  for (int v = 0; v < snet.num_nodes; ++v) {
    if (v == snet.source || v == snet.sink) continue;
    pi[v] = lp.add_var(-pi_bound, pi_bound, 0.0, tag("pi", v));
  }
  for (std::size_t a = 0; a < snet.arcs.size(); ++a) {
    const SplitArc& arc = snet.arcs[a];
    double weight = arc.capacity;
    if (arc.origin == ArcOrigin::NodeSplit && y.interdicted[arc.origin_index]) weight = 0.0;
    if (arc.origin == ArcOrigin::Restructurable && !z.active(arc.origin_index)) weight = 0.0;
    const int theta = lp.add_var(0.0, kThetaUpper, weight, tag("theta", static_cast<int>(a)));
    std::vector<std::pair<int, double>> row;
    double rhs = 0.0;
    if (arc.tail == snet.source) {
      row.push_back({pi[arc.head], 1.0});
      rhs = 1.0;
    } else if (arc.head == snet.sink) {
      row.push_back({pi[arc.tail], -1.0});
    } else {
      row.push_back({pi[arc.head], 1.0});
      row.push_back({pi[arc.tail], -1.0});
    }
    row.push_back({theta, 1.0});
    lp.add_row(std::move(row), Relation::GreaterEqual, rhs, tag("cut", static_cast<int>(a)));
  }
  return lp;
}

// Eq. (3)-style LP: shifted rows, plain capacity objective.
LinearProgram build_shifted(const LayeredNetwork& net, const SplitNetwork& snet,
                            const InterdictionPlan& y, const RestructurePlan& z) {
  LinearProgram lp;
  lp.sense = Sense::Minimize;
  const double pi_bound = snet.num_nodes;
  std::vector<int> pi(snet.num_nodes, -1);
  for (int v = 0; v < snet.num_nodes; ++v) {
    if (v == snet.source || v == snet.sink) continue;
    pi[v] = lp.add_var(-pi_bound, pi_bound, 0.0, tag("pi", v));
  }
  for (std::size_t a = 0; a < snet.arcs.size(); ++a) {
    const SplitArc& arc = snet.arcs[a];
    const int theta = lp.add_var(0.0, kThetaUpper, arc.capacity, tag("theta", static_cast<int>(a)));
    std::vector<std::pair<int, double>> row;
    double rhs = 0.0;
    if (arc.tail == snet.source) {
      row.push_back({pi[arc.head], 1.0});
      rhs = 1.0;
    } else if (arc.head == snet.sink) {
      row.push_back({pi[arc.tail], -1.0});
    } else {
      row.push_back({pi[arc.head], 1.0});
      row.push_back({pi[arc.tail], -1.0});
    }
    row.push_back({theta, 1.0});
    if (arc.origin == ArcOrigin::NodeSplit && y.interdicted[arc.origin_index]) rhs -= 1.0;
    if (arc.origin == ArcOrigin::Restructurable) rhs += z.active(arc.origin_index) ? 0.0 : -1.0;
    lp.add_row(std::move(row), Relation::GreaterEqual, rhs, tag("cut", static_cast<int>(a)));
  }
  return lp;
}

}  // namespace

DualEquivalenceReport check_dual_equivalence(const LayeredNetwork& net,
                                             const SplitNetwork& snet,
                                             const InterdictionPlan& y,
                                             const RestructurePlan& z) {
  DualEquivalenceReport report;
  const MipSolution cw = solve_lp(build_capacity_weighted(net, snet, y, z));
  const MipSolution sh = solve_lp(build_shifted(net, snet, y, z));
  if (cw.status != SolveStatus::Optimal || sh.status != SolveStatus::Optimal)
    throw std::logic_error("check_dual_equivalence: dual LP did not solve to optimality");
  report.capacity_weighted = cw.objective;
  report.shifted = sh.objective;
  report.combinatorial = max_flow(snet, y, z).value;
  report.equal = std::abs(report.capacity_weighted - report.shifted) <= 1e-6 &&
                 std::abs(report.capacity_weighted - report.combinatorial) <= 1e-6;
  if (!report.equal) {
    std::ostringstream os;
    os << "dual equivalence violated: eq2=" << report.capacity_weighted
       << " eq3=" << report.shifted << " flow=" << report.combinatorial;
    throw std::logic_error(os.str());
  }
  return report;
}

}  // namespace mfnipr
