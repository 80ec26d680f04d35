#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mfnipr/formulate.hpp"
#include "mfnipr/network.hpp"
#include "mfnipr/restructure.hpp"

namespace mfnipr {

enum class CcgMode : std::uint8_t { PartialInfo, Baseline, Enumerate };

const char* to_string(CcgMode m);

struct CcgConfig {
  CcgMode mode = CcgMode::PartialInfo;
  double epsilon = 1e-4;
  double time_limit = 600.0;             // seconds; the per-iteration stop rule of §4
  long max_iterations = 100000;
  long mip_node_limit = std::numeric_limits<long>::max();
  double mip_abs_gap = 1e-9;
  std::size_t enumeration_cap = 4000000; // Enumerate mode only
};

struct CcgIteration {
  int iteration = 0;
  double master_objective = 0.0;                  // eta^n, the running lower bound
  std::optional<double> subproblem_objective;     // eta-hat^n, absent on the closing check
  double master_seconds = 0.0;
  double subproblem_seconds = 0.0;
  std::size_t pool_size = 0;
};

struct CcgResult {
  double lower = 0.0;
  double upper = 0.0;
  InterdictionPlan y_star;
  RestructurePlan z_star;
  SolveStatus status = SolveStatus::Optimal;      // Optimal or LimitReached
  std::vector<CcgIteration> log;
  int iterations = 0;                             // master solves
  int plans_visited = 0;                          // subproblem solves
  double wall_seconds = 0.0;
};

// Algorithm 1 (PartialInfo / Baseline) or the exact brute-force oracle
// (Enumerate). The incumbent upper bound is always re-evaluated with the
// combinatorial max flow, so upper == max_flow(y*, z*) exactly.
CcgResult solve(const LayeredNetwork& net, const RestructureRules& rules,
                const InterdictionPolicy& policy, const CcgConfig& config);

// Exact bilevel optimum min_{y in Y} max_{z in Z(y)} maxflow(y, z).
CcgResult solve_enumerate(const LayeredNetwork& net, const RestructureRules& rules,
                          const InterdictionPolicy& policy, std::size_t cap = 4000000);

// Objective of Eq. (7) at a fixed interdiction plan: the "flow after optimal
// restructuring" curve of the §5 figures.
double evaluate_after_plan(const LayeredNetwork& net, const RestructureRules& rules,
                           const InterdictionPlan& y_fixed, const CcgConfig& config = {});

}  // namespace mfnipr
