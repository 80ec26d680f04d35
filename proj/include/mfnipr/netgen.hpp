#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mfnipr/network.hpp"
#include "mfnipr/restructure.hpp"

namespace mfnipr {

enum class Variant : std::uint8_t { Base, Recruitment, Organizational };

const char* to_string(Variant v);
Variant variant_from_string(const std::string& s);

// Six-layer city-level instance generator. Deterministic in seed; all
// capacities carry at most two decimals so flow arithmetic stays exact.
struct GenParams {
  std::uint64_t seed = 1;
  int num_users = 200;
  int organizations = 2;
  Variant variant = Variant::Base;
  double recruit_fraction = 0.2;
  int restruct_per_node = 3;      // per-node cap on sampled replacement arcs per layer pair
  double restruct_density = 1.0;  // scales how many arcs each layer pair receives
  double defender_budget = 6.0;   // r
  int leadership_min = 1;         // t
};

struct Instance {
  LayeredNetwork net;
  RestructureRules rules;
  std::vector<NodeId> leadership;  // T: top two layers of the two largest organizations
  int leadership_min = 1;
  std::uint64_t seed = 0;
  Variant variant = Variant::Base;
  int num_users = 0;

  InterdictionPolicy policy(double attacker_budget, bool leadership_on) const;
};

Instance generate(const GenParams& params);

// Adds ceil(fraction * count) recruitable users, dealers and safe houses,
// connectable to the source only through restructuring.
Instance add_recruitment(Instance instance, double fraction, std::uint64_t seed);

// Adds layer-skipping promotion arcs (set P) and cross-organization
// recruitment arcs (set C); both sides activatable only as z_in.
Instance add_org_restructuring(Instance instance, std::uint64_t seed);

}  // namespace mfnipr
