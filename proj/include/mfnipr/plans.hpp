#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mfnipr {

// Attacker decision: interdicted[i] flags original node i, realized as
// zeroing the capacity of its split arc (i', i'').
struct InterdictionPlan {
  std::vector<std::uint8_t> interdicted;

  InterdictionPlan() = default;
  explicit InterdictionPlan(std::size_t num_nodes) : interdicted(num_nodes, 0) {}

  bool none() const {
    for (auto v : interdicted)
      if (v) return false;
    return true;
  }
  bool operator==(const InterdictionPlan&) const = default;
};

// Defender decision over restructurable arcs, split by which endpoint
// initiates the connection. At most one side may be active per arc.
struct RestructurePlan {
  std::vector<std::uint8_t> z_in;
  std::vector<std::uint8_t> z_out;

  RestructurePlan() = default;
  explicit RestructurePlan(std::size_t num_arcs) : z_in(num_arcs, 0), z_out(num_arcs, 0) {}

  bool active(std::size_t e) const { return z_in[e] != 0 || z_out[e] != 0; }
  std::size_t size() const { return z_in.size(); }
  bool empty_plan() const {
    for (std::size_t e = 0; e < z_in.size(); ++e)
      if (active(e)) return false;
    return true;
  }
  bool operator==(const RestructurePlan&) const = default;
};

}  // namespace mfnipr
