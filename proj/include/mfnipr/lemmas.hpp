#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mfnipr/network.hpp"
#include "mfnipr/restructure.hpp"

namespace mfnipr {

// Classification of a restructurable arc against the canonical min cut of the
// current maximum flow. The first three classes provably cannot increase the
// flow when the arc is added alone.
enum class ArcClass {
  SinkSideTail,        // tail on the sink side
  SourceSideInternal,  // both endpoints on the source side
  CrossCutNoSinkPath,  // crosses the cut, head has no residual path to t
  PotentiallyIncreasing,
};

const char* to_string(ArcClass c);

ArcClass classify_arc(const SplitNetwork& snet, const AuxiliaryNetwork& aux,
                      const CutSolution& cut, std::size_t restructurable_index);

// Sound certificate that no feasible restructuring over the candidate arcs can
// raise the max flow: every candidate harmless alone, and no cross-cut arc is
// chased by a candidate leaving its head from the sink side. A false result is
// inconclusive, not a proof of increase.
bool certify_no_increase(const SplitNetwork& snet, const AuxiliaryNetwork& aux,
                         const CutSolution& cut, std::span<const std::size_t> candidates);

// Test oracle: enumerate every feasible restructuring over the candidates and
// compare flows against the interdicted flow. Throws ResourceError past cap.
bool verify_no_increase_bruteforce(const LayeredNetwork& net, const SplitNetwork& snet,
                                   const RestructureRules& rules, const InterdictionPlan& y,
                                   std::span<const std::size_t> candidates, std::size_t cap);

}  // namespace mfnipr
