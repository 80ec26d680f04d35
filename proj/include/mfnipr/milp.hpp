#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mfnipr/errors.hpp"

namespace mfnipr {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense : std::uint8_t { Minimize, Maximize };
enum class Relation : std::uint8_t { LessEqual, GreaterEqual, Equal };

struct VariableDef {
  double lower = 0.0;
  double upper = kInf;
  std::string name;
};

struct RowDef {
  std::vector<std::pair<int, double>> coeffs;  // sparse (column, value)
  Relation rel = Relation::LessEqual;
  double rhs = 0.0;
  std::string name;
};

struct LinearProgram {
  Sense sense = Sense::Minimize;
  std::vector<double> objective;
  std::vector<VariableDef> vars;
  std::vector<RowDef> rows;

  int add_var(double lower, double upper, double obj, std::string name = {});
  void add_row(std::vector<std::pair<int, double>> coeffs, Relation rel, double rhs,
               std::string name = {});
  std::size_t num_vars() const { return vars.size(); }
};

// A LinearProgram plus a binary-integrality mask; every integral variable must
// have bounds within [0, 1].
struct MixedIntegerProgram {
  LinearProgram lp;
  std::vector<std::uint8_t> integral;

  int add_binary(double obj, std::string name = {});
  void mark_integral(int var);
};

enum class SolveStatus : std::uint8_t { Optimal, Infeasible, Unbounded, LimitReached };

const char* to_string(SolveStatus s);

struct MipSolution {
  SolveStatus status = SolveStatus::Infeasible;
  double objective = 0.0;          // in the problem's own sense
  std::vector<double> x;
  double bound = 0.0;              // best proven bound, problem sense
  double gap = 0.0;                // |objective - bound|
  long node_count = 0;
  double wall_seconds = 0.0;
  long pivots = 0;       // simplex pivots across the solve
  long cold_solves = 0;  // full two-phase restarts
};

struct SolveLimits {
  double time_limit = kInf;        // seconds
  long node_limit = std::numeric_limits<long>::max();
  double abs_gap = 1e-6;
  // When every integer-feasible objective lies on a value grid of this pitch,
  // subtrees that cannot beat the incumbent by a full step are pruned.
  double objective_granularity = 0.0;
  // Optional per-variable branching weights; fractionality is scaled by the
  // weight when choosing the branch variable (empty = uniform).
  std::vector<double> branch_weight;
};

// Optional incumbent source: given the node LP point, propose a full integral
// assignment. The engine verifies rows, bounds and integrality before use.
struct MipCallbacks {
  std::function<std::optional<std::vector<double>>(std::span<const double>)> candidate;
};

MipSolution solve_lp(const LinearProgram& lp);
MipSolution solve_mip(const MixedIntegerProgram& mip, const SolveLimits& limits = {},
                      const MipCallbacks& callbacks = {});

// Plain-text model dump (MPS-like layout) for cross-checking with other tools.
void write_model(const MixedIntegerProgram& mip, std::ostream& out);

}  // namespace mfnipr
