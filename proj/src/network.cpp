#include "mfnipr/network.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

namespace mfnipr {

std::vector<std::vector<NodeId>> LayeredNetwork::children_of() const {
  std::vector<std::vector<NodeId>> out(nodes.size());
  for (const auto& a : arcs) out[a.tail].push_back(a.head);
  return out;
}

std::vector<std::vector<NodeId>> LayeredNetwork::parents_of() const {
  std::vector<std::vector<NodeId>> in(nodes.size());
  for (const auto& a : arcs) in[a.head].push_back(a.tail);
  return in;
}

namespace {

void check_endpoints(const LayeredNetwork& net, NodeId tail, NodeId head,
                     const char* kind, std::vector<ValidationIssue>& issues) {
  const int n = static_cast<int>(net.nodes.size());
  if (tail < 0 || tail >= n || head < 0 || head >= n) {
    std::ostringstream os;
    os << kind << " (" << tail << "," << head << ") references an unknown node";
    issues.push_back({true, os.str()});
    return;
  }
  if (tail == head) {
    std::ostringstream os;
    os << kind << " (" << tail << "," << head << ") is a self-loop";
    issues.push_back({true, os.str()});
  }
}

}  // namespace

std::vector<ValidationIssue> validate(const LayeredNetwork& net) {
  std::vector<ValidationIssue> issues;
  const int n = static_cast<int>(net.nodes.size());

  if (net.num_layers <= 0) issues.push_back({true, "num_layers must be positive"});
  for (int i = 0; i < n; ++i) {
    const NodeRecord& nd = net.nodes[i];
    if (nd.id != i) {
      std::ostringstream os;
      os << "node at position " << i << " has id " << nd.id << " (ids must be dense 0..n-1)";
      issues.push_back({true, os.str()});
    }
    if (nd.layer < 1 || nd.layer > net.num_layers) {
      std::ostringstream os;
      os << "node " << i << " layer " << nd.layer << " outside 1.." << net.num_layers;
      issues.push_back({true, os.str()});
    }
    if (nd.capacity < 0 || nd.interdiction_cost < 0 || nd.supply < 0 || nd.demand < 0) {
      std::ostringstream os;
      os << "node " << i << " carries a negative capacity/cost/supply/demand";
      issues.push_back({true, os.str()});
    }
    if (nd.demand > 0 && nd.layer != 1) {
      std::ostringstream os;
      os << "node " << i << " has demand but is not in layer 1";
      issues.push_back({true, os.str()});
    }
    if (nd.supply > 0 && nd.layer != net.num_layers) {
      std::ostringstream os;
      os << "node " << i << " has supply but is not in the top layer";
      issues.push_back({true, os.str()});
    }
  }
  if (!issues.empty()) return issues;  // arc checks need sane nodes

  std::set<std::pair<NodeId, NodeId>> base_set, restruct_set;
  for (const auto& a : net.arcs) {
    check_endpoints(net, a.tail, a.head, "arc", issues);
    if (!base_set.insert({a.tail, a.head}).second) {
      std::ostringstream os;
      os << "duplicate arc (" << a.tail << "," << a.head << ")";
      issues.push_back({true, os.str()});
    }
  }
  for (const auto& a : net.restructurable_arcs) {
    check_endpoints(net, a.tail, a.head, "restructurable arc", issues);
    if (a.cost < 0) {
      std::ostringstream os;
      os << "restructurable arc (" << a.tail << "," << a.head << ") has negative cost";
      issues.push_back({true, os.str()});
    }
    if (!restruct_set.insert({a.tail, a.head}).second) {
      std::ostringstream os;
      os << "duplicate restructurable arc (" << a.tail << "," << a.head << ")";
      issues.push_back({true, os.str()});
    }
    if (base_set.count({a.tail, a.head})) {
      std::ostringstream os;
      os << "arc (" << a.tail << "," << a.head << ") appears in both A and A^R";
      issues.push_back({true, os.str()});
    }
  }
  if (!issues.empty()) return issues;

  for (const auto& a : net.arcs) {
    const int lt = net.nodes[a.tail].layer, lh = net.nodes[a.head].layer;
    if (lt != lh + 1) {
      std::ostringstream os;
      os << "arc (" << a.tail << "," << a.head << ") spans layers " << lt << "->" << lh
         << " (base arcs must go from layer L to L-1)";
      issues.push_back({true, os.str()});
    }
  }
  for (const auto& a : net.restructurable_arcs) {
    const int gap = net.nodes[a.tail].layer - net.nodes[a.head].layer;
    const bool promotion = net.nodes[a.head].promotable && gap == 2;
    if (gap != 1 && !promotion) {
      std::ostringstream os;
      os << "restructurable arc (" << a.tail << "," << a.head << ") spans " << gap
         << " layers (1 expected, 2 only into promotable heads)";
      issues.push_back({true, os.str()});
    }
  }

  auto parents = net.parents_of();
  auto children = net.children_of();
  for (int i = 0; i < n; ++i) {
    if (net.nodes[i].recruitable && !parents[i].empty()) {
      std::ostringstream os;
      os << "recruitable node " << i << " has an incoming base arc";
      issues.push_back({true, os.str()});
    }
    if (net.nodes[i].tau > static_cast<int>(children[i].size())) {
      std::ostringstream os;
      os << "node " << i << " has tau " << net.nodes[i].tau << " > out-degree "
         << children[i].size() << "; it can never be interdicted";
      issues.push_back({false, os.str()});
    }
  }
  return issues;
}

void throw_if_invalid(const LayeredNetwork& net) {
  for (const auto& issue : validate(net))
    if (issue.fatal) throw ValidationError(issue.message);
}

SplitNetwork split_nodes(const LayeredNetwork& net) {
  throw_if_invalid(net);

  SplitNetwork snet;
  snet.num_original = static_cast<int>(net.nodes.size());
  snet.num_nodes = 2 * snet.num_original + 2;
  snet.source = 2 * snet.num_original;
  snet.sink = 2 * snet.num_original + 1;

  double cap_sum = 0.0;
  for (const auto& nd : net.nodes) cap_sum += nd.capacity + nd.supply;
  snet.sentinel = 1.0 + cap_sum;

  snet.split_arc_of_node.assign(net.nodes.size(), -1);
  for (const auto& nd : net.nodes) {
    snet.split_arc_of_node[nd.id] = static_cast<int>(snet.arcs.size());
    snet.arcs.push_back({SplitNetwork::in_node(nd.id), SplitNetwork::out_node(nd.id),
                         nd.capacity, ArcOrigin::NodeSplit, nd.id});
  }
  for (std::size_t a = 0; a < net.arcs.size(); ++a) {
    snet.arcs.push_back({SplitNetwork::out_node(net.arcs[a].tail),
                         SplitNetwork::in_node(net.arcs[a].head), snet.sentinel,
                         ArcOrigin::Base, static_cast<int>(a)});
  }
  snet.arc_of_restructurable.assign(net.restructurable_arcs.size(), -1);
  for (std::size_t a = 0; a < net.restructurable_arcs.size(); ++a) {
    snet.arc_of_restructurable[a] = static_cast<int>(snet.arcs.size());
    snet.arcs.push_back({SplitNetwork::out_node(net.restructurable_arcs[a].tail),
                         SplitNetwork::in_node(net.restructurable_arcs[a].head), snet.sentinel,
                         ArcOrigin::Restructurable, static_cast<int>(a)});
  }
  for (const auto& nd : net.nodes) {
    if (nd.layer == net.num_layers)
      snet.arcs.push_back({snet.source, SplitNetwork::in_node(nd.id), nd.supply,
                           ArcOrigin::Source, nd.id});
  }
  for (const auto& nd : net.nodes) {
    if (nd.layer == 1)
      snet.arcs.push_back({SplitNetwork::out_node(nd.id), snet.sink, nd.demand,
                           ArcOrigin::Sink, nd.id});
  }
  return snet;
}

double effective_capacity(const SplitNetwork& snet, std::size_t arc_index,
                          const InterdictionPlan& y, const RestructurePlan& z) {
  const SplitArc& arc = snet.arcs[arc_index];
  switch (arc.origin) {
    case ArcOrigin::NodeSplit:
      return y.interdicted[arc.origin_index] ? 0.0 : arc.capacity;
    case ArcOrigin::Restructurable:
      return z.active(arc.origin_index) ? arc.capacity : 0.0;
    default:
      return arc.capacity;
  }
}

namespace {

constexpr double kBigFlow = std::numeric_limits<double>::infinity();

// Residual arc-pair workspace shared by max_flow / min_cut / auxiliary.
struct Residual {
  struct Edge {
    int to;
    int pair;      // index of the reverse edge
    double cap;    // remaining capacity
    int arc;       // split-network arc index, -1 for reverse edges
  };
  std::vector<Edge> edges;
  std::vector<std::vector<int>> head;  // per node: edge indices

  Residual(const SplitNetwork& snet, const InterdictionPlan& y, const RestructurePlan& z)
      : head(snet.num_nodes) {
    edges.reserve(2 * snet.arcs.size());
    for (std::size_t a = 0; a < snet.arcs.size(); ++a) {
      const double cap = effective_capacity(snet, a, y, z);
      const int fwd = static_cast<int>(edges.size());
      edges.push_back({snet.arcs[a].head, fwd + 1, cap, static_cast<int>(a)});
      edges.push_back({snet.arcs[a].tail, fwd, 0.0, -1});
      head[snet.arcs[a].tail].push_back(fwd);
      head[snet.arcs[a].head].push_back(fwd + 1);
    }
  }
};

constexpr double kFlowEps = 1e-12;

}  // namespace

FlowAssignment max_flow(const SplitNetwork& snet, const InterdictionPlan& y,
                        const RestructurePlan& z) {
  Residual res(snet, y, z);
  const int s = snet.source, t = snet.sink;

  std::vector<int> level(snet.num_nodes);
  std::vector<std::size_t> iter(snet.num_nodes);
  double total = 0.0;

  auto bfs = [&]() {
    std::fill(level.begin(), level.end(), -1);
    std::queue<int> q;
    level[s] = 0;
    q.push(s);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int e : res.head[v]) {
        const auto& ed = res.edges[e];
        if (ed.cap > kFlowEps && level[ed.to] < 0) {
          level[ed.to] = level[v] + 1;
          q.push(ed.to);
        }
      }
    }
    return level[t] >= 0;
  };

  // Iterative blocking-flow DFS along level-increasing residual edges.
  std::vector<int> path_edge(snet.num_nodes + 1);
  std::function<double(int, double)> dfs = [&](int v, double limit) -> double {
    if (v == t) return limit;
    for (std::size_t& i = iter[v]; i < res.head[v].size(); ++i) {
      int e = res.head[v][i];
      auto& ed = res.edges[e];
      if (ed.cap > kFlowEps && level[ed.to] == level[v] + 1) {
        double pushed = dfs(ed.to, std::min(limit, ed.cap));
        if (pushed > kFlowEps) {
          ed.cap -= pushed;
          res.edges[ed.pair].cap += pushed;
          return pushed;
        }
      }
    }
    return 0.0;
  };

  while (bfs()) {
    std::fill(iter.begin(), iter.end(), 0);
    while (true) {
      double pushed = dfs(s, kBigFlow);
      if (pushed <= kFlowEps) break;
      total += pushed;
    }
  }

  FlowAssignment out;
  out.flow.assign(snet.arcs.size(), 0.0);
  for (std::size_t a = 0; a < snet.arcs.size(); ++a) {
    const double cap = effective_capacity(snet, a, y, z);
    out.flow[a] = cap - res.edges[2 * a].cap;
    if (out.flow[a] < 0 && out.flow[a] > -1e-9) out.flow[a] = 0.0;
  }
  out.value = total;
  return out;
}

CutSolution min_cut(const SplitNetwork& snet, const InterdictionPlan& y,
                    const RestructurePlan& z, const FlowAssignment& flow) {
  CutSolution cut;
  cut.source_side.assign(snet.num_nodes, 0);

  // Residual reachability from s gives the canonical (minimal) source side.
  std::vector<std::vector<int>> adj(snet.num_nodes);
  for (std::size_t a = 0; a < snet.arcs.size(); ++a) {
    const double cap = effective_capacity(snet, a, y, z);
    if (flow.flow[a] < cap - kFlowEps) adj[snet.arcs[a].tail].push_back(snet.arcs[a].head);
    if (flow.flow[a] > kFlowEps) adj[snet.arcs[a].head].push_back(snet.arcs[a].tail);
  }
  std::queue<int> q;
  q.push(snet.source);
  cut.source_side[snet.source] = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int w : adj[v])
      if (!cut.source_side[w]) {
        cut.source_side[w] = 1;
        q.push(w);
      }
  }

  cut.value = 0.0;
  for (std::size_t a = 0; a < snet.arcs.size(); ++a) {
    const double cap = effective_capacity(snet, a, y, z);
    if (cap > kFlowEps && cut.source_side[snet.arcs[a].tail] &&
        !cut.source_side[snet.arcs[a].head]) {
      cut.cut_arcs.push_back(static_cast<int>(a));
      cut.value += cap;
    }
  }
  if (std::abs(cut.value - flow.value) > 1e-9)
    throw std::logic_error("min_cut: cut value disagrees with flow value (max-flow bug)");
  return cut;
}

AuxiliaryNetwork auxiliary(const SplitNetwork& snet, const InterdictionPlan& y,
                           const RestructurePlan& z, const FlowAssignment& flow) {
  AuxiliaryNetwork aux;
  aux.num_nodes = snet.num_nodes;
  aux.adjacency.assign(snet.num_nodes, {});
  for (std::size_t a = 0; a < snet.arcs.size(); ++a) {
    const double cap = effective_capacity(snet, a, y, z);
    const int tail = snet.arcs[a].tail, head = snet.arcs[a].head;
    if (flow.flow[a] < cap - kFlowEps) {
      aux.arcs.emplace_back(tail, head);
      aux.adjacency[tail].push_back(head);
    }
    if (flow.flow[a] > kFlowEps) {
      aux.arcs.emplace_back(head, tail);
      aux.adjacency[head].push_back(tail);
    }
  }
  return aux;
}

double capacity_granularity(const LayeredNetwork& net) {
  std::vector<double> values;
  for (const auto& nd : net.nodes) {
    values.push_back(nd.capacity);
    values.push_back(nd.supply);
    values.push_back(nd.demand);
  }
  double pitch = 1.0;
  for (int d = 0; d <= 6; ++d, pitch /= 10.0) {
    bool all_on_grid = true;
    for (double v : values) {
      const double scaled = v / pitch;
      if (std::abs(scaled - std::round(scaled)) > 1e-6 * std::max(1.0, std::abs(scaled))) {
        all_on_grid = false;
        break;
      }
    }
    if (all_on_grid) return pitch;
  }
  return 0.0;
}

bool has_path(const AuxiliaryNetwork& aux, int from, int to) {
  if (from == to) return true;
  std::vector<std::uint8_t> seen(aux.num_nodes, 0);
  std::queue<int> q;
  q.push(from);
  seen[from] = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int w : aux.adjacency[v]) {
      if (w == to) return true;
      if (!seen[w]) {
        seen[w] = 1;
        q.push(w);
      }
    }
  }
  return false;
}

}  // namespace mfnipr
