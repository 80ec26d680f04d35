#include <cmath>
#include <sstream>

#include "doctest.h"
#include "mfnipr/milp.hpp"
#include "mfnipr/rng.hpp"
#include "support/oracles.hpp"

using namespace mfnipr;
using namespace mfnipr::testsupport;

TEST_CASE("lp: bounded single variable") {
  LinearProgram lp;
  lp.sense = Sense::Maximize;
  lp.add_var(0.0, kInf, 1.0, "x");
  lp.add_row({{0, 1.0}}, Relation::LessEqual, 3.0);
  const auto sol = solve_lp(lp);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(3.0));
}

TEST_CASE("lp: infeasible pair") {
  LinearProgram lp;
  lp.add_var(-kInf, kInf, 0.0, "x");
  lp.vars[0].lower = -100.0;  // keep one finite bound
  lp.add_row({{0, 1.0}}, Relation::LessEqual, 0.0);
  lp.add_row({{0, 1.0}}, Relation::GreaterEqual, 1.0);
  CHECK(solve_lp(lp).status == SolveStatus::Infeasible);
}

TEST_CASE("lp: unbounded") {
  LinearProgram lp;
  lp.sense = Sense::Maximize;
  lp.add_var(0.0, kInf, 1.0, "x");
  CHECK(solve_lp(lp).status == SolveStatus::Unbounded);
}

TEST_CASE("lp: equality rows and negative bounds") {
  LinearProgram lp;
  lp.add_var(-5.0, 5.0, 1.0, "x");
  lp.add_var(-5.0, 5.0, 2.0, "y");
  lp.add_row({{0, 1.0}, {1, 1.0}}, Relation::Equal, 1.0);
  const auto sol = solve_lp(lp);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(-3.0));  // x = 5, y = -4
}

TEST_CASE("lp: random programs match the vertex oracle") {
  Rng rng(90210);
  int solved = 0;
  for (int trial = 0; trial < 80; ++trial) {
    LinearProgram lp;
    lp.sense = rng.chance(0.5) ? Sense::Minimize : Sense::Maximize;
    const int n = rng.uniform_int(2, 4);
    for (int j = 0; j < n; ++j)
      lp.add_var(0.0, rng.uniform_int(1, 6), rng.uniform_int(-5, 5));
    const int m = rng.uniform_int(2, 5);
    for (int r = 0; r < m; ++r) {
      std::vector<std::pair<int, double>> coeffs;
      for (int j = 0; j < n; ++j)
        if (rng.chance(0.7)) coeffs.push_back({j, static_cast<double>(rng.uniform_int(-4, 4))});
      if (coeffs.empty()) coeffs.push_back({0, 1.0});
      lp.add_row(std::move(coeffs),
                 rng.chance(0.5) ? Relation::LessEqual : Relation::GreaterEqual,
                 rng.uniform_int(-6, 10));
    }
    const auto sol = solve_lp(lp);
    const double oracle = lp_vertex_oracle(lp);
    if (sol.status == SolveStatus::Optimal) {
      ++solved;
      REQUIRE(std::isfinite(oracle));
      CHECK(sol.objective == doctest::Approx(oracle).epsilon(1e-6));
    } else if (sol.status == SolveStatus::Infeasible) {
      CHECK(!std::isfinite(oracle));
    }
  }
  CHECK(solved > 20);  // the generator must actually exercise the solver
}

TEST_CASE("lp: strong duality on random inequality programs") {
  Rng rng(4242);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    LinearProgram lp;
    lp.sense = Sense::Minimize;
    const int n = rng.uniform_int(3, 8);
    for (int j = 0; j < n; ++j)
      lp.add_var(0.0, rng.uniform_int(2, 9), rng.uniform_int(-6, 6));
    const int m = rng.uniform_int(3, 8);
    for (int r = 0; r < m; ++r) {
      std::vector<std::pair<int, double>> coeffs;
      for (int j = 0; j < n; ++j)
        if (rng.chance(0.6)) coeffs.push_back({j, static_cast<double>(rng.uniform_int(-4, 4))});
      if (coeffs.empty()) continue;
      lp.add_row(std::move(coeffs),
                 rng.chance(0.5) ? Relation::LessEqual : Relation::GreaterEqual,
                 rng.uniform_int(-5, 12));
    }
    const auto primal = solve_lp(lp);
    if (primal.status != SolveStatus::Optimal) continue;
    const auto dual = solve_lp(dualize(lp));
    REQUIRE(dual.status == SolveStatus::Optimal);
    CHECK(primal.objective == doctest::Approx(dual.objective).epsilon(1e-6));
    ++checked;
  }
  CHECK(checked > 15);
}

TEST_CASE("mip: tiny knapsack") {
  MixedIntegerProgram mip;
  mip.lp.sense = Sense::Maximize;
  mip.add_binary(3.0, "x");
  mip.add_binary(2.0, "y");
  mip.lp.add_row({{0, 1.0}, {1, 1.0}}, Relation::LessEqual, 1.0);
  const auto sol = solve_mip(mip);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(3.0));
  CHECK(sol.x[0] == doctest::Approx(1.0));
  CHECK(sol.x[1] == doctest::Approx(0.0));
}

TEST_CASE("mip: infeasible binary system") {
  MixedIntegerProgram mip;
  mip.add_binary(1.0, "x");
  mip.lp.add_row({{0, 1.0}}, Relation::GreaterEqual, 0.5);
  mip.lp.add_row({{0, 1.0}}, Relation::LessEqual, 0.4);
  CHECK(solve_mip(mip).status == SolveStatus::Infeasible);
}

TEST_CASE("mip: random binary programs match exhaustive enumeration") {
  Rng rng(1123581321);
  int optimal = 0;
  for (int trial = 0; trial < 60; ++trial) {
    MixedIntegerProgram mip;
    mip.lp.sense = rng.chance(0.5) ? Sense::Minimize : Sense::Maximize;
    const int n = rng.uniform_int(3, 10);
    for (int j = 0; j < n; ++j) mip.add_binary(rng.uniform_int(-6, 6));
    const int m = rng.uniform_int(2, 6);
    for (int r = 0; r < m; ++r) {
      std::vector<std::pair<int, double>> coeffs;
      for (int j = 0; j < n; ++j)
        if (rng.chance(0.6)) coeffs.push_back({j, static_cast<double>(rng.uniform_int(-3, 3))});
      if (coeffs.empty()) continue;
      mip.lp.add_row(std::move(coeffs),
                     rng.chance(0.6) ? Relation::LessEqual : Relation::GreaterEqual,
                     rng.uniform_int(-4, 6));
    }
    bool feasible = false;
    const double oracle = binary_enumeration_oracle(mip, &feasible);
    const auto sol = solve_mip(mip);
    if (!feasible) {
      CHECK(sol.status == SolveStatus::Infeasible);
      continue;
    }
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(oracle).epsilon(1e-9));
    ++optimal;
  }
  CHECK(optimal > 20);
}

TEST_CASE("mip: deterministic across repeated solves") {
  Rng rng(5);
  MixedIntegerProgram mip;
  mip.lp.sense = Sense::Maximize;
  for (int j = 0; j < 8; ++j) mip.add_binary(rng.uniform_int(1, 9));
  for (int r = 0; r < 4; ++r) {
    std::vector<std::pair<int, double>> coeffs;
    for (int j = 0; j < 8; ++j) coeffs.push_back({j, static_cast<double>(rng.uniform_int(1, 4))});
    mip.lp.add_row(std::move(coeffs), Relation::LessEqual, 10.0);
  }
  const auto a = solve_mip(mip);
  const auto b = solve_mip(mip);
  REQUIRE(a.status == SolveStatus::Optimal);
  CHECK(a.objective == b.objective);
  CHECK(a.node_count == b.node_count);
  CHECK(a.x == b.x);
}

TEST_CASE("mip: candidate callback supplies incumbents") {
  MixedIntegerProgram mip;
  mip.lp.sense = Sense::Maximize;
  for (int j = 0; j < 6; ++j) mip.add_binary(1.0);
  std::vector<std::pair<int, double>> coeffs;
  for (int j = 0; j < 6; ++j) coeffs.push_back({j, 1.0});
  mip.lp.add_row(std::move(coeffs), Relation::LessEqual, 3.0);

  MipCallbacks cb;
  int calls = 0;
  cb.candidate = [&](std::span<const double> x) -> std::optional<std::vector<double>> {
    ++calls;
    std::vector<double> cand(6, 0.0);
    cand[0] = cand[1] = cand[2] = 1.0;
    return cand;
  };
  const auto sol = solve_mip(mip, {}, cb);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(3.0));
  CHECK(calls >= 1);
  CHECK(sol.node_count == 1);  // callback incumbent closes the gap at the root
}

TEST_CASE("mip: node limit reports LimitReached with a bound") {
  Rng rng(99);
  MixedIntegerProgram mip;
  mip.lp.sense = Sense::Maximize;
  const int n = 14;
  for (int j = 0; j < n; ++j) mip.add_binary(rng.uniform_int(3, 9));
  for (int r = 0; r < 6; ++r) {
    std::vector<std::pair<int, double>> coeffs;
    for (int j = 0; j < n; ++j) coeffs.push_back({j, static_cast<double>(rng.uniform_int(1, 5))});
    mip.lp.add_row(std::move(coeffs), Relation::LessEqual, 11.0);
  }
  SolveLimits limits;
  limits.node_limit = 2;
  const auto sol = solve_mip(mip, limits);
  if (sol.status == SolveStatus::LimitReached) {
    CHECK(sol.bound >= sol.objective - 1e-9);
  }
}

TEST_CASE("model dump is readable text") {
  MixedIntegerProgram mip;
  mip.add_binary(1.0, "pick");
  mip.lp.add_row({{0, 1.0}}, Relation::LessEqual, 1.0, "cap");
  std::ostringstream os;
  write_model(mip, os);
  CHECK(os.str().find("pick") != std::string::npos);
  CHECK(os.str().find("cap") != std::string::npos);
}
