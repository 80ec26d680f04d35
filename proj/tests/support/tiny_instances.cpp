#include "support/tiny_instances.hpp"

#include <algorithm>

namespace mfnipr::testsupport {

namespace {

NodeRecord node(NodeId id, int layer, double cap, double cost = 1.0) {
  NodeRecord n;
  n.id = id;
  n.layer = layer;
  n.capacity = cap;
  n.interdiction_cost = cost;
  return n;
}

}  // namespace

LayeredNetwork single_node_path(double cap) {
  LayeredNetwork net;
  net.num_layers = 1;
  NodeRecord a = node(0, 1, cap);
  a.supply = cap;
  a.demand = cap;
  net.nodes.push_back(a);
  return net;
}

TinyInstance diamond() {
  TinyInstance t;
  t.net.num_layers = 2;
  for (int i = 0; i < 2; ++i) {
    NodeRecord s = node(i, 2, 3.0);
    s.supply = 3.0;
    t.net.nodes.push_back(s);
  }
  for (int i = 2; i < 4; ++i) {
    NodeRecord u = node(i, 1, 2.0);
    u.demand = 2.0;
    t.net.nodes.push_back(u);
  }
  t.net.arcs = {{0, 2}, {0, 3}, {1, 2}, {1, 3}};
  t.net.restructurable_arcs = {};
  t.rules = RestructureRules::from(t.net, 6.0);
  return t;
}

TinyInstance flow_increase_fixture(std::size_t* increasing_arc) {
  TinyInstance t;
  t.net.num_layers = 3;
  NodeRecord S = node(0, 3, 20.0, 10.0);
  S.supply = 20.0;
  NodeRecord M1 = node(1, 2, 7.0, 5.0);
  NodeRecord M2 = node(2, 2, 7.0, 5.0);
  NodeRecord U1 = node(3, 1, 4.0, 1.0);
  U1.demand = 4.0;
  NodeRecord U2 = node(4, 1, 4.0, 1.0);
  U2.demand = 4.0;
  NodeRecord U4 = node(5, 1, 12.0, 1.0);
  U4.demand = 12.0;
  t.net.nodes = {S, M1, M2, U1, U2, U4};
  t.net.arcs = {{0, 1}, {0, 2}, {1, 3}, {1, 4}, {2, 5}};
  t.net.restructurable_arcs = {{1, 5, 1.0}};
  t.rules = RestructureRules::from(t.net, 6.0);
  if (increasing_arc) *increasing_arc = 0;
  return t;
}

TinyInstance random_tiny(Rng& rng, const TinyOptions& options) {
  TinyInstance t;
  const int layers = rng.uniform_int(2, options.max_layers);
  t.net.num_layers = layers;

  // Layer sizes that fit the node budget, at least one node per layer.
  std::vector<int> sizes(layers, 1);
  int remaining = options.max_nodes - layers;
  for (int extra = rng.uniform_int(0, remaining); extra > 0; --extra)
    sizes[rng.uniform_int(0, layers - 1)] += 1;

  std::vector<std::vector<NodeId>> by_layer(layers + 1);
  NodeId next = 0;
  for (int layer = 1; layer <= layers; ++layer) {
    for (int i = 0; i < sizes[layer - 1]; ++i) {
      NodeRecord n = node(next, layer, rng.uniform_grid(0.5, 3.0, 0.01),
                          rng.uniform_int(1, 5));
      n.k = rng.uniform_int(1, 2);
      n.l = rng.uniform_int(1, 2);
      n.s = rng.uniform_int(1, 2);
      if (layer == layers) n.supply = rng.uniform_grid(1.0, 4.0, 0.01);
      if (layer == 1) n.demand = rng.uniform_grid(0.3, 1.5, 0.01);
      by_layer[layer].push_back(next);
      t.net.nodes.push_back(n);
      ++next;
    }
  }

  // Every non-top node gets at least one parent; extra arcs at random.
  for (int layer = 1; layer < layers; ++layer) {
    for (NodeId j : by_layer[layer]) {
      const auto& uppers = by_layer[layer + 1];
      std::vector<NodeId> picks = uppers;
      rng.shuffle(picks);
      const int want = std::min<int>(rng.uniform_int(1, 2), static_cast<int>(picks.size()));
      for (int p = 0; p < want; ++p) t.net.arcs.push_back({picks[p], j});
    }
  }

  // Candidate restructurable arcs: layer-adjacent pairs not already in A.
  std::vector<std::pair<NodeId, NodeId>> existing;
  for (const auto& a : t.net.arcs) existing.push_back({a.tail, a.head});
  std::sort(existing.begin(), existing.end());
  std::vector<std::pair<NodeId, NodeId>> candidates;
  for (int layer = 1; layer < layers; ++layer)
    for (NodeId i : by_layer[layer + 1])
      for (NodeId j : by_layer[layer])
        if (!std::binary_search(existing.begin(), existing.end(), std::make_pair(i, j)))
          candidates.push_back({i, j});
  rng.shuffle(candidates);
  const int want = std::min<int>(options.max_restruct, static_cast<int>(candidates.size()));
  for (int e = 0; e < want; ++e)
    t.net.restructurable_arcs.push_back(
        {candidates[e].first, candidates[e].second,
         static_cast<double>(rng.uniform_int(1, 2))});

  if (options.taus) {
    auto children = t.net.children_of();
    for (auto& n : t.net.nodes) {
      if (n.layer == 1 || children[n.id].empty()) continue;
      if (rng.chance(0.4))
        n.tau = std::min<int>(rng.uniform_int(1, 2), static_cast<int>(children[n.id].size()));
    }
  }

  t.rules = RestructureRules::from(t.net, rng.uniform_int(2, 6));
  return t;
}

}  // namespace mfnipr::testsupport
