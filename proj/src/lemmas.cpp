#include "mfnipr/lemmas.hpp"

#include <algorithm>

#include "mfnipr/errors.hpp"

namespace mfnipr {

const char* to_string(ArcClass c) {
  switch (c) {
    case ArcClass::SinkSideTail: return "sink-side-tail";
    case ArcClass::SourceSideInternal: return "source-side-internal";
    case ArcClass::CrossCutNoSinkPath: return "cross-cut-no-sink-path";
    case ArcClass::PotentiallyIncreasing: return "potentially-increasing";
  }
  return "?";
}

ArcClass classify_arc(const SplitNetwork& snet, const AuxiliaryNetwork& aux,
                      const CutSolution& cut, std::size_t restructurable_index) {
  const SplitArc& arc = snet.arcs[snet.arc_of_restructurable[restructurable_index]];
  const bool tail_source_side = cut.source_side[arc.tail] != 0;
  const bool head_source_side = cut.source_side[arc.head] != 0;
  if (!tail_source_side) return ArcClass::SinkSideTail;
  if (head_source_side) return ArcClass::SourceSideInternal;
  if (!has_path(aux, arc.head, snet.sink)) return ArcClass::CrossCutNoSinkPath;
  return ArcClass::PotentiallyIncreasing;
}

bool certify_no_increase(const SplitNetwork& snet, const AuxiliaryNetwork& aux,
                         const CutSolution& cut, std::span<const std::size_t> candidates) {
  std::vector<ArcClass> classes;
  classes.reserve(candidates.size());
  bool theorem1 = true;
  for (std::size_t e : candidates) {
    const ArcClass c = classify_arc(snet, aux, cut, e);
    if (c == ArcClass::PotentiallyIncreasing) return false;
    if (c == ArcClass::CrossCutNoSinkPath) theorem1 = false;
    classes.push_back(c);
  }
  if (theorem1) return true;

  // Theorem 2: a cross-cut arc (i,j) must not be chased by another candidate
  // (j,k) classified sink-side-tail.
  for (std::size_t a = 0; a < candidates.size(); ++a) {
    if (classes[a] != ArcClass::CrossCutNoSinkPath) continue;
    const int j_in = snet.arcs[snet.arc_of_restructurable[candidates[a]]].head;
    const int j = j_in / 2;  // in_node(j) = 2j
    for (std::size_t b = 0; b < candidates.size(); ++b) {
      if (b == a) continue;
      const SplitArc& other = snet.arcs[snet.arc_of_restructurable[candidates[b]]];
      if (other.tail == SplitNetwork::out_node(j) && classes[b] == ArcClass::SinkSideTail)
        return false;
    }
  }
  return true;
}

bool verify_no_increase_bruteforce(const LayeredNetwork& net, const SplitNetwork& snet,
                                   const RestructureRules& rules, const InterdictionPlan& y,
                                   std::span<const std::size_t> candidates, std::size_t cap) {
  if (candidates.size() > 20)
    throw ResourceError("verify_no_increase_bruteforce: too many candidates");

  const double base = max_flow(snet, y, RestructurePlan(net.restructurable_arcs.size())).value;

  RestructurePlan plan(net.restructurable_arcs.size());
  std::size_t visited = 0;
  // Every per-arc state in {off, in, out}; full feasibility checked at leaves.
  std::vector<int> state(candidates.size(), 0);
  while (true) {
    if (++visited > cap)
      throw ResourceError("verify_no_increase_bruteforce: enumeration exceeds cap");
    if (feasible(net, rules, y, plan).feasible) {
      if (max_flow(snet, y, plan).value > base + 1e-9) return false;
    }
    std::size_t pos = 0;
    while (pos < candidates.size()) {
      state[pos] = (state[pos] + 1) % 3;
      plan.z_in[candidates[pos]] = state[pos] == 1 ? 1 : 0;
      plan.z_out[candidates[pos]] = state[pos] == 2 ? 1 : 0;
      if (state[pos] != 0) break;
      ++pos;
    }
    if (pos == candidates.size()) break;
  }
  return true;
}

}  // namespace mfnipr
