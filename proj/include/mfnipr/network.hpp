#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mfnipr/errors.hpp"
#include "mfnipr/plans.hpp"

namespace mfnipr {

using NodeId = int;

struct NodeRecord {
  NodeId id = 0;
  int layer = 1;                    // 1..num_layers, flow moves from num_layers down to 1
  double capacity = 0.0;            // u_i, enforced through the split arc
  double interdiction_cost = 0.0;   // c_i
  int tau = 0;                      // climbing-the-ladder threshold
  int k = 1;                        // new arcs allowed per interdicted neighbor
  int l = 1;                        // cap on restructured arcs leaving the node
  int s = 1;                        // cap on restructured arcs entering the node
  int organization = -1;            // -1 = none
  bool recruitable = false;
  bool promotable = false;
  bool cross_org_recruitable = false;
  double supply = 0.0;              // top layer only
  double demand = 0.0;              // layer 1 only
};

struct Arc {
  NodeId tail = 0;
  NodeId head = 0;
  bool operator==(const Arc&) const = default;
};

struct RestructurableArc {
  NodeId tail = 0;
  NodeId head = 0;
  double cost = 1.0;  // a_ij
};

struct LayeredNetwork {
  std::vector<NodeRecord> nodes;
  std::vector<Arc> arcs;                              // A
  std::vector<RestructurableArc> restructurable_arcs; // A^R
  int num_layers = 0;

  std::size_t size() const { return nodes.size(); }
  std::vector<std::vector<NodeId>> children_of() const;  // heads of base arcs out of each node
  std::vector<std::vector<NodeId>> parents_of() const;   // tails of base arcs into each node
};

struct ValidationIssue {
  bool fatal = false;
  std::string message;
};

// Structural checks per the LayeredNetwork/NodeRecord invariants. Fatal issues
// make throw_if_invalid raise ValidationError; tau > out-degree only warns.
std::vector<ValidationIssue> validate(const LayeredNetwork& net);
void throw_if_invalid(const LayeredNetwork& net);

enum class ArcOrigin : std::uint8_t { NodeSplit, Base, Restructurable, Source, Sink };

struct SplitArc {
  int tail = 0;
  int head = 0;
  double capacity = 0.0;  // sentinel for Base/Restructurable
  ArcOrigin origin = ArcOrigin::Base;
  int origin_index = 0;   // node id, base-arc index, or A^R index
};

// Node-split transform: original node i becomes the pair (in_node(i), out_node(i))
// joined by an interdictable arc of capacity u_i. A super source feeds every
// top-layer in-node at its supply; every layer-1 out-node drains to the super
// sink at its demand. Base and restructurable arcs are uncapacitated and carry
// a finite sentinel = 1 + sum of node capacities + sum of supplies.
struct SplitNetwork {
  int num_original = 0;
  int num_nodes = 0;  // 2*num_original + 2
  int source = 0;
  int sink = 0;
  double sentinel = 0.0;
  std::vector<SplitArc> arcs;
  std::vector<int> split_arc_of_node;       // original node -> arc index
  std::vector<int> arc_of_restructurable;   // A^R index -> arc index

  static int in_node(NodeId i) { return 2 * i; }
  static int out_node(NodeId i) { return 2 * i + 1; }
};

SplitNetwork split_nodes(const LayeredNetwork& net);

// Capacity of arc a once interdictions and restructurings are applied.
double effective_capacity(const SplitNetwork& snet, std::size_t arc_index,
                          const InterdictionPlan& y, const RestructurePlan& z);

struct FlowAssignment {
  std::vector<double> flow;  // per split-network arc
  double value = 0.0;
};

struct CutSolution {
  std::vector<std::uint8_t> source_side;  // per split-network node, 1 = in U
  std::vector<int> cut_arcs;              // indices of U->Ubar arcs with positive capacity
  double value = 0.0;
};

struct AuxiliaryNetwork {
  int num_nodes = 0;
  std::vector<std::pair<int, int>> arcs;       // A_f
  std::vector<std::vector<int>> adjacency;     // successor lists over A_f
};

// Exact maximum flow (Dinic) under the effective capacities of (y, z).
FlowAssignment max_flow(const SplitNetwork& snet, const InterdictionPlan& y,
                        const RestructurePlan& z);

// Canonical minimum cut: U = nodes reachable from s in the residual network of
// the given maximum flow. Asserts cut value == flow value.
CutSolution min_cut(const SplitNetwork& snet, const InterdictionPlan& y,
                    const RestructurePlan& z, const FlowAssignment& flow);

// Residual digraph D_f: (i,j) when x < u_eff, (j,i) when x > 0.
AuxiliaryNetwork auxiliary(const SplitNetwork& snet, const InterdictionPlan& y,
                           const RestructurePlan& z, const FlowAssignment& flow);

bool has_path(const AuxiliaryNetwork& aux, int from, int to);

// Pitch of the value grid all cut/flow objectives lie on: 10^-d for the
// smallest d <= 6 covering every capacity, supply and demand; 0 if none fits.
double capacity_granularity(const LayeredNetwork& net);

}  // namespace mfnipr
