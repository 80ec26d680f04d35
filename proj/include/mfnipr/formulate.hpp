#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mfnipr/milp.hpp"
#include "mfnipr/network.hpp"
#include "mfnipr/restructure.hpp"

namespace mfnipr {

struct PlanPoolEntry {
  RestructurePlan plan;
  int iteration = 0;            // C&CG iteration that produced it (0 = seed)
  InterdictionPlan generator;   // the y-hat the subproblem answered
};

// Growing set {z^1, ..., z^n}; entry 0 is always the null plan so the first
// master reproduces MFNIP.
struct PlanPool {
  std::vector<PlanPoolEntry> entries;

  static PlanPool seeded(std::size_t num_restructurable, std::size_t num_nodes);
  void append(RestructurePlan plan, int iteration, InterdictionPlan generator);
  std::size_t size() const { return entries.size(); }
};

enum class MasterFlavor : std::uint8_t {
  PartialInfo,  // per-coordinate w projection rows (Eq. 6 shape)
  Baseline,     // all-or-nothing per-plan f^k indicator (§4 comparison method)
};

// Variable layout of an emitted master, used by the incumbent heuristic and by
// result extraction. Index -1 marks an absent variable.
struct MasterLayout {
  int eta = -1;
  std::vector<int> y;                  // per original node
  std::vector<int> w_in, w_out;        // per A^R index
  std::vector<int> f;                  // per emitted block (Baseline only)
  struct Block {
    std::vector<int> pi;               // per split node (source/sink = -1)
    std::vector<int> theta;            // per split arc (-1 where eliminated)
    int pool_index = 0;                // plan this block prices
  };
  std::vector<Block> blocks;
};

struct MasterModel {
  MixedIntegerProgram mip;
  MasterLayout layout;
};

// MFNIP dual form: Eq. (3) with every z fixed to 0; no w machinery, single block.
MasterModel build_mfnip(const LayeredNetwork& net, const SplitNetwork& snet,
                        const InterdictionPolicy& policy);

// C&CG master over the pool, Eq. (6) shape (PartialInfo) or the §4 baseline.
MasterModel build_master(const LayeredNetwork& net, const SplitNetwork& snet,
                         const RestructureRules& rules, const InterdictionPolicy& policy,
                         const PlanPool& pool, MasterFlavor flavor);

// Combinatorial incumbent source: rounds y, repairs it into Y, derives w and
// per-block cuts by exact max-flow, and returns the full assignment.
MipCallbacks master_callbacks(const MasterModel& model, const LayeredNetwork& net,
                              const SplitNetwork& snet, const InterdictionPolicy& policy,
                              const PlanPool& pool, MasterFlavor flavor);

// Branch weights that steer fractionality toward high-capacity interdictions.
std::vector<double> master_branch_weights(const MasterModel& model, const LayeredNetwork& net);

struct SubproblemLayout {
  std::vector<int> flow;               // per split arc
  int return_flow = -1;                // x_ts
  std::vector<int> z_in, z_out;        // per A^R index
};

struct SubproblemModel {
  MixedIntegerProgram mip;
  SubproblemLayout layout;
};

// Recourse problem Eq. (7): optimal restructuring response to a fixed y-hat.
SubproblemModel build_subproblem(const LayeredNetwork& net, const SplitNetwork& snet,
                                 const RestructureRules& rules, const InterdictionPlan& y_hat);

MipCallbacks subproblem_callbacks(const SubproblemModel& model, const LayeredNetwork& net,
                                  const SplitNetwork& snet, const RestructureRules& rules,
                                  const InterdictionPlan& y_hat);

// Extracts the rounded plan encoded in a subproblem solution.
RestructurePlan extract_plan(const SubproblemModel& model, const MipSolution& sol);
InterdictionPlan extract_interdiction(const MasterLayout& layout, const MipSolution& sol,
                                      std::size_t num_nodes);

struct DualEquivalenceReport {
  double capacity_weighted = 0.0;  // Eq. (2)-style optimum
  double shifted = 0.0;            // Eq. (3)-style optimum
  double combinatorial = 0.0;      // max-flow value
  bool equal = false;              // all three within tolerance
};

// Theorem 3 checker for a fixed (y, z) pair; tolerance 1e-6.
DualEquivalenceReport check_dual_equivalence(const LayeredNetwork& net,
                                             const SplitNetwork& snet,
                                             const InterdictionPlan& y,
                                             const RestructurePlan& z);

}  // namespace mfnipr
