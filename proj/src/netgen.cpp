#include "mfnipr/netgen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "mfnipr/rng.hpp"

namespace mfnipr {

const char* to_string(Variant v) {
  switch (v) {
    case Variant::Base: return "base";
    case Variant::Recruitment: return "recruitment";
    case Variant::Organizational: return "organizational";
  }
  return "?";
}

Variant variant_from_string(const std::string& s) {
  if (s == "base") return Variant::Base;
  if (s == "recruitment") return Variant::Recruitment;
  if (s == "organizational") return Variant::Organizational;
  throw ValidationError("unknown variant: " + s);
}

InterdictionPolicy Instance::policy(double attacker_budget, bool leadership_on) const {
  InterdictionPolicy p;
  p.budget = attacker_budget;
  p.leadership_on = leadership_on;
  p.leadership_set = leadership;
  p.leadership_min = leadership_min;
  return p;
}

namespace {

// Per-layer interdiction costs and climbing-the-ladder thresholds.
constexpr double kLayerCost[7] = {0, 1, 3, 8, 16, 28, 45};
constexpr int kLayerTau[7] = {0, 0, 2, 2, 1, 1, 1};

constexpr int kLayers = 6;

int scaled(int users, int per200, int floor_value) {
  const int v = static_cast<int>(std::lround(per200 * users / 200.0));
  return std::max(v, floor_value);
}

long cents(double v) { return std::lround(v * 100.0); }
double from_cents(long c) { return static_cast<double>(c) / 100.0; }

// 1.2x a cents total, rounded half-up to whole cents.
long headroom(long total_cents) { return (total_cents * 120 + 50) / 100; }

struct Builder {
  LayeredNetwork net;
  std::vector<std::vector<NodeId>> by_layer{std::vector<std::vector<NodeId>>(kLayers + 1)};

  NodeId add_node(int layer, int organization) {
    NodeRecord n;
    n.id = static_cast<int>(net.nodes.size());
    n.layer = layer;
    n.interdiction_cost = kLayerCost[layer];
    n.tau = kLayerTau[layer];
    n.organization = organization;
    net.nodes.push_back(n);
    by_layer[layer].push_back(n.id);
    return n.id;
  }
};

std::set<std::pair<NodeId, NodeId>> arc_set(const LayeredNetwork& net) {
  std::set<std::pair<NodeId, NodeId>> s;
  for (const auto& a : net.arcs) s.insert({a.tail, a.head});
  for (const auto& a : net.restructurable_arcs) s.insert({a.tail, a.head});
  return s;
}

void assign_capacities(LayeredNetwork& net, Rng& rng) {
  auto children = net.children_of();
  // Users draw demand; everything above carries 1.2x of its children.
  std::vector<long> cap_cents(net.nodes.size(), 0);
  for (auto& n : net.nodes) {
    if (n.layer != 1) continue;
    cap_cents[n.id] = rng.uniform_int(30, 90);
    n.demand = from_cents(cap_cents[n.id]);
    n.capacity = n.demand;
  }
  for (int layer = 2; layer <= 3; ++layer) {
    for (auto& n : net.nodes) {
      if (n.layer != layer) continue;
      long sum = 0;
      for (NodeId c : children[n.id]) sum += cap_cents[c];
      cap_cents[n.id] = headroom(sum);
      n.capacity = from_cents(cap_cents[n.id]);
    }
  }
  // Layers 4..6 carry the full organization supply.
  std::map<int, long> org_supply;
  for (const auto& n : net.nodes)
    if (n.layer == 3) org_supply[n.organization] += cap_cents[n.id];
  for (auto& [org, total] : org_supply) total = headroom(total);
  for (auto& n : net.nodes) {
    if (n.layer < 4) continue;
    n.capacity = from_cents(org_supply[n.organization]);
    if (n.layer == kLayers) n.supply = n.capacity;
  }
}

void add_layer_restructurables(LayeredNetwork& net,
                               const std::vector<std::vector<NodeId>>& by_layer, Rng& rng,
                               double density, int per_node_cap) {
  auto taken = arc_set(net);
  for (int layer = 2; layer <= kLayers; ++layer) {
    const auto& uppers = by_layer[layer];
    const auto& lowers = by_layer[layer - 1];
    auto gather = [&](bool same_org) {
      std::vector<std::pair<NodeId, NodeId>> c;
      for (NodeId i : uppers)
        for (NodeId j : lowers) {
          if (same_org && net.nodes[i].organization != net.nodes[j].organization) continue;
          if (!taken.count({i, j})) c.push_back({i, j});
        }
      return c;
    };
    // Organizations stay separate above the dealer layer; fall back to
    // cross-organization pairs only when a tiny instance leaves no choice.
    std::vector<std::pair<NodeId, NodeId>> candidates = gather(layer - 1 >= 3);
    if (candidates.empty() && layer - 1 >= 3) candidates = gather(false);
    if (candidates.empty()) {
      // The layer pair is fully saturated by base arcs; repurpose one whose
      // removal keeps the head connected and the tail's ladder satisfiable.
      auto parents = net.parents_of();
      auto children = net.children_of();
      for (std::size_t a = 0; a < net.arcs.size(); ++a) {
        const Arc arc = net.arcs[a];
        if (net.nodes[arc.tail].layer != layer) continue;
        if (parents[arc.head].size() < 2) continue;
        if (static_cast<int>(children[arc.tail].size()) <=
            std::max(1, net.nodes[arc.tail].tau))
          continue;
        net.arcs.erase(net.arcs.begin() + static_cast<long>(a));
        net.restructurable_arcs.push_back({arc.tail, arc.head, 1.0});
        break;
      }
      continue;
    }
    rng.shuffle(candidates);

    const int target = std::max(
        1, static_cast<int>(std::lround(density * std::min(uppers.size(), lowers.size()))));
    std::map<NodeId, int> used;
    int added = 0;
    for (const auto& [i, j] : candidates) {
      if (added >= target) break;
      if (used[i] >= per_node_cap || used[j] >= per_node_cap) continue;
      net.restructurable_arcs.push_back({i, j, 1.0});
      taken.insert({i, j});
      used[i] += 1;
      used[j] += 1;
      ++added;
    }
  }
}

std::vector<int> orgs_by_size(const LayeredNetwork& net) {
  std::map<int, int> count;
  for (const auto& n : net.nodes)
    if (n.organization >= 0) count[n.organization] += 1;
  std::vector<std::pair<int, int>> items(count.begin(), count.end());
  std::stable_sort(items.begin(), items.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<int> out;
  for (const auto& [org, c] : items) out.push_back(org);
  return out;
}

std::vector<NodeId> leadership_set(const LayeredNetwork& net) {
  const auto ranked = orgs_by_size(net);
  std::set<int> top_orgs(ranked.begin(), ranked.begin() + std::min<std::size_t>(2, ranked.size()));
  std::vector<NodeId> t;
  for (const auto& n : net.nodes)
    if (n.layer >= kLayers - 1 && top_orgs.count(n.organization)) t.push_back(n.id);
  return t;
}

}  // namespace

Instance generate(const GenParams& params) {
  if (params.num_users < 4) throw ValidationError("generate: need at least 4 users");
  if (params.organizations < 1) throw ValidationError("generate: need at least 1 organization");

  Rng rng(params.seed);
  Builder b;
  b.net.num_layers = kLayers;

  const int users = params.num_users;
  const int orgs = params.organizations;
  const int dealers = scaled(users, 40, 2);
  const int safes = scaled(users, 12, orgs);
  const int l4 = scaled(users, 6, orgs);
  const int l5 = scaled(users, 4, orgs);
  const int l6 = orgs;

  for (int i = 0; i < users; ++i) b.add_node(1, -1);
  for (int i = 0; i < dealers; ++i) b.add_node(2, -1);
  for (int i = 0; i < safes; ++i) b.add_node(3, i % orgs);
  for (int i = 0; i < l4; ++i) b.add_node(4, i % orgs);
  for (int i = 0; i < l5; ++i) b.add_node(5, i % orgs);
  for (int i = 0; i < l6; ++i) b.add_node(6, i % orgs);

  LayeredNetwork& net = b.net;
  std::set<std::pair<NodeId, NodeId>> arcs;
  auto link = [&](NodeId i, NodeId j) {
    if (arcs.insert({i, j}).second) net.arcs.push_back({i, j});
  };

  // Parents for every node below the top; organizations stay separate from
  // the safe-house layer up.
  for (int layer = 1; layer < kLayers; ++layer) {
    for (NodeId j : b.by_layer[layer]) {
      std::vector<NodeId> eligible;
      for (NodeId i : b.by_layer[layer + 1])
        if (layer < 3 || net.nodes[i].organization == net.nodes[j].organization)
          eligible.push_back(i);
      rng.shuffle(eligible);
      const int want = std::min<int>(layer >= 4 ? 1 : rng.uniform_int(1, 2),
                                     static_cast<int>(eligible.size()));
      for (int p = 0; p < want; ++p) link(eligible[p], j);
    }
  }

  // Coverage: out-degrees large enough for the per-layer tau thresholds.
  auto ensure_children = [&](NodeId i, int need, const std::vector<NodeId>& pool) {
    auto children = net.children_of();
    int have = static_cast<int>(children[i].size());
    std::vector<NodeId> extra;
    for (NodeId j : pool) {
      if (net.nodes[i].layer >= 4 &&
          net.nodes[i].organization != net.nodes[j].organization)
        continue;
      if (!arcs.count({i, j})) extra.push_back(j);
    }
    rng.shuffle(extra);
    for (NodeId j : extra) {
      if (have >= need) break;
      link(i, j);
      ++have;
    }
  };
  for (int layer = 2; layer <= kLayers; ++layer) {
    const int need = std::max(1, kLayerTau[layer]);
    for (NodeId i : b.by_layer[layer]) ensure_children(i, need, b.by_layer[layer - 1]);
  }

  // Two dealers under the first safe house share two users, so the cheapest
  // full climbing-the-ladder chain to layer 5 costs exactly 60.
  {
    auto children = net.children_of();
    const NodeId safe0 = b.by_layer[3].front();
    std::vector<NodeId> ds = children[safe0];
    std::sort(ds.begin(), ds.end());
    if (ds.size() >= 2) {
      const NodeId d1 = ds[0], d2 = ds[1];
      auto d1_users = children[d1];
      std::sort(d1_users.begin(), d1_users.end());
      int shared = 0;
      for (NodeId u : d1_users) {
        if (shared >= 2) break;
        link(d2, u);
        ++shared;
      }
    }
  }

  assign_capacities(net, rng);
  add_layer_restructurables(net, b.by_layer, rng, params.restruct_density,
                            params.restruct_per_node);

  Instance instance;
  instance.net = std::move(net);
  instance.rules = RestructureRules::from(instance.net, params.defender_budget);
  instance.leadership = leadership_set(instance.net);
  instance.leadership_min = params.leadership_min;
  instance.seed = params.seed;
  instance.variant = params.variant;
  instance.num_users = users;

  if (params.variant == Variant::Recruitment)
    instance = add_recruitment(std::move(instance), params.recruit_fraction,
                               params.seed * 0x9e3779b97f4a7c15ULL + 1);
  if (params.variant == Variant::Organizational)
    instance = add_org_restructuring(std::move(instance), params.seed * 0x9e3779b97f4a7c15ULL + 2);

  throw_if_invalid(instance.net);
  return instance;
}

Instance add_recruitment(Instance instance, double fraction, std::uint64_t seed) {
  if (fraction <= 0.0) return instance;
  Rng rng(seed);
  LayeredNetwork& net = instance.net;

  std::vector<NodeId> users, dealers, safes;
  for (const auto& n : net.nodes) {
    if (n.recruitable) continue;
    if (n.layer == 1) users.push_back(n.id);
    if (n.layer == 2) dealers.push_back(n.id);
    if (n.layer == 3) safes.push_back(n.id);
  }
  const auto parents = net.parents_of();
  const auto children = net.children_of();
  auto taken = arc_set(net);

  auto add_recruit = [&](int layer, int organization) {
    NodeRecord n;
    n.id = static_cast<int>(net.nodes.size());
    n.layer = layer;
    n.interdiction_cost = kLayerCost[layer];
    n.tau = kLayerTau[layer];
    n.organization = organization;
    n.recruitable = true;
    net.nodes.push_back(n);
    return n.id;
  };
  auto pick_some = [&](const std::vector<NodeId>& pool, int lo, int hi) {
    std::vector<NodeId> v = pool;
    rng.shuffle(v);
    v.resize(std::min<std::size_t>(v.size(), rng.uniform_int(lo, hi)));
    return v;
  };

  const int new_users = static_cast<int>(std::ceil(fraction * users.size()));
  const int new_dealers = static_cast<int>(std::ceil(fraction * dealers.size()));
  const int new_safes = static_cast<int>(std::ceil(fraction * safes.size()));

  for (int i = 0; i < new_users; ++i) {
    const NodeId id = add_recruit(1, -1);
    const long d = rng.uniform_int(30, 90);
    net.nodes[id].demand = from_cents(d);
    net.nodes[id].capacity = from_cents(d);
    for (NodeId dealer : pick_some(dealers, 1, 2)) {
      if (taken.insert({dealer, id}).second)
        net.restructurable_arcs.push_back({dealer, id, 1.0});
    }
  }
  for (int i = 0; i < new_dealers; ++i) {
    const NodeId id = add_recruit(2, -1);
    long sum = 0;
    for (NodeId u : pick_some(users, 2, 3)) {
      if (taken.insert({id, u}).second) {
        net.arcs.push_back({id, u});
        sum += cents(net.nodes[u].demand);
      }
    }
    net.nodes[id].capacity = from_cents(headroom(sum));
    for (NodeId safe : pick_some(safes, 1, 2)) {
      if (taken.insert({safe, id}).second)
        net.restructurable_arcs.push_back({safe, id, 1.0});
    }
  }
  for (int i = 0; i < new_safes; ++i) {
    const NodeId tpl = safes[rng.uniform_int(0, static_cast<int>(safes.size()) - 1)];
    const NodeId id = add_recruit(3, net.nodes[tpl].organization);
    net.nodes[id].capacity = net.nodes[tpl].capacity;
    // Backup safe house: mirror the template's arc pattern.
    for (NodeId dealer : children[tpl])
      if (taken.insert({id, dealer}).second) net.arcs.push_back({id, dealer});
    for (NodeId up : parents[tpl])
      if (taken.insert({up, id}).second) net.restructurable_arcs.push_back({up, id, 1.0});
  }

  instance.rules = RestructureRules::from(net, instance.rules.budget);
  instance.variant = Variant::Recruitment;
  throw_if_invalid(net);
  return instance;
}

Instance add_org_restructuring(Instance instance, std::uint64_t seed) {
  LayeredNetwork& net = instance.net;
  std::set<int> orgs;
  for (const auto& n : net.nodes)
    if (n.organization >= 0) orgs.insert(n.organization);
  if (orgs.size() < 2)
    throw ValidationError("add_org_restructuring: needs at least 2 organizations");

  Rng rng(seed);
  auto taken = arc_set(net);
  std::vector<std::vector<NodeId>> by_layer(kLayers + 1);
  for (const auto& n : net.nodes) by_layer[n.layer].push_back(n.id);

  // Promotion: arcs skipping one layer down, same organization (or into the
  // organization-free dealer layer), activatable only by the promoted head.
  std::vector<std::pair<NodeId, NodeId>> promo;
  for (int layer = 4; layer <= kLayers; ++layer)
    for (NodeId i : by_layer[layer])
      for (NodeId j : by_layer[layer - 2]) {
        if (net.nodes[j].layer >= 3 &&
            net.nodes[i].organization != net.nodes[j].organization)
          continue;
        if (net.nodes[j].recruitable) continue;
        if (!taken.count({i, j})) promo.push_back({i, j});
      }
  rng.shuffle(promo);
  const int promo_want = std::min<int>(static_cast<int>(promo.size()),
                                       2 * static_cast<int>(orgs.size()));
  for (int p = 0; p < promo_want; ++p) {
    const auto [i, j] = promo[p];
    net.nodes[j].promotable = true;
    net.restructurable_arcs.push_back({i, j, 1.0});
    taken.insert({i, j});
  }

  // Cross-organization recruitment: one-layer arcs between organizations.
  // Cross-organization arcs already present in A^R join the recruitable set.
  for (const auto& a : net.restructurable_arcs) {
    const auto& tail = net.nodes[a.tail];
    auto& head = net.nodes[a.head];
    if (tail.organization >= 0 && head.organization >= 0 &&
        tail.organization != head.organization &&
        tail.layer - head.layer == 1)
      head.cross_org_recruitable = true;
  }
  std::vector<std::pair<NodeId, NodeId>> cross;
  for (int layer = 4; layer <= kLayers; ++layer)
    for (NodeId i : by_layer[layer])
      for (NodeId j : by_layer[layer - 1]) {
        if (net.nodes[j].organization < 0 ||
            net.nodes[i].organization == net.nodes[j].organization)
          continue;
        if (net.nodes[j].recruitable) continue;
        if (!taken.count({i, j})) cross.push_back({i, j});
      }
  rng.shuffle(cross);
  const int cross_want = std::min<int>(static_cast<int>(cross.size()),
                                       2 * static_cast<int>(orgs.size()));
  for (int p = 0; p < cross_want; ++p) {
    const auto [i, j] = cross[p];
    net.nodes[j].cross_org_recruitable = true;
    net.restructurable_arcs.push_back({i, j, 1.0});
    taken.insert({i, j});
  }

  instance.rules = RestructureRules::from(net, instance.rules.budget);
  instance.variant = Variant::Organizational;
  throw_if_invalid(net);
  return instance;
}

}  // namespace mfnipr
