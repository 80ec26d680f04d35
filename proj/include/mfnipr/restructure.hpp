#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mfnipr/network.hpp"
#include "mfnipr/plans.hpp"

namespace mfnipr {

// Z(y) parameters. Per-node vectors are indexed by original node id; arc_cost
// and in_only by A^R index. Arcs into promotable or cross-org-recruitable
// heads can only be activated from the head's side (z_out forced to 0).
struct RestructureRules {
  std::vector<int> out_cap;        // l_i
  std::vector<int> in_cap;         // s_j
  std::vector<int> reaction;       // k_i
  std::vector<double> arc_cost;    // a_e
  double budget = 0.0;             // r
  std::vector<std::uint8_t> in_only;

  static RestructureRules from(const LayeredNetwork& net, double budget);
};

// Feasible-interdiction set Y: budget, climbing-the-ladder, and (optionally)
// the leadership requirement over set T.
struct InterdictionPolicy {
  double budget = 0.0;
  bool leadership_on = false;
  std::vector<NodeId> leadership_set;  // T
  int leadership_min = 1;              // t
};

struct FeasibilityReport {
  bool feasible = true;
  std::vector<std::string> violations;  // fixed family order, stable for golden tests
};

FeasibilityReport interdiction_feasible(const LayeredNetwork& net,
                                        const InterdictionPolicy& policy,
                                        const InterdictionPlan& y);

// w^in[e] = 1 iff some base parent of head(e) is interdicted;
// w^out[e] = 1 iff some base child of tail(e) is interdicted.
struct PermissionIndicators {
  std::vector<std::uint8_t> w_in;
  std::vector<std::uint8_t> w_out;
};

PermissionIndicators permissions(const LayeredNetwork& net, const InterdictionPlan& y);

// Appendix-A constraint system (A.4)-(A.9) plus the in-only restrictions.
FeasibilityReport feasible(const LayeredNetwork& net, const RestructureRules& rules,
                           const InterdictionPlan& y, const RestructurePlan& plan);

// Monotone sub-plan projection: keep exactly the coordinates still permitted.
RestructurePlan project(const RestructurePlan& bar, const PermissionIndicators& w);

// All plans of Z(y), deduplicated; throws ResourceError past cap.
std::vector<RestructurePlan> enumerate_plans(const LayeredNetwork& net,
                                             const RestructureRules& rules,
                                             const InterdictionPlan& y,
                                             std::size_t cap);

// All plans of Y under the policy; throws ResourceError past cap.
std::vector<InterdictionPlan> enumerate_interdictions(const LayeredNetwork& net,
                                                      const InterdictionPolicy& policy,
                                                      std::size_t cap);

}  // namespace mfnipr
