#include "doctest.h"
#include "mfnipr/lemmas.hpp"
#include "mfnipr/rng.hpp"
#include "support/tiny_instances.hpp"

using namespace mfnipr;
using namespace mfnipr::testsupport;

namespace {

struct Classified {
  SplitNetwork snet;
  FlowAssignment flow;
  CutSolution cut;
  AuxiliaryNetwork aux;
};

Classified analyze(const LayeredNetwork& net, const InterdictionPlan& y) {
  Classified c{split_nodes(net), {}, {}, {}};
  const RestructurePlan none(net.restructurable_arcs.size());
  c.flow = max_flow(c.snet, y, none);
  c.cut = min_cut(c.snet, y, none, c.flow);
  c.aux = auxiliary(c.snet, y, none, c.flow);
  return c;
}

}  // namespace

TEST_CASE("classification follows the cut sides by definition") {
  Rng rng(11);
  int sink_side = 0, source_side = 0;
  for (int trial = 0; trial < 60; ++trial) {
    TinyInstance t = random_tiny(rng);
    if (t.net.restructurable_arcs.empty()) continue;
    InterdictionPlan y(t.net.nodes.size());
    for (auto& v : y.interdicted) v = rng.chance(0.25) ? 1 : 0;
    const auto c = analyze(t.net, y);
    for (std::size_t e = 0; e < t.net.restructurable_arcs.size(); ++e) {
      const auto& arc = t.net.restructurable_arcs[e];
      const bool tail_u = c.cut.source_side[SplitNetwork::out_node(arc.tail)];
      const bool head_u = c.cut.source_side[SplitNetwork::in_node(arc.head)];
      const ArcClass cls = classify_arc(c.snet, c.aux, c.cut, e);
      if (!tail_u) {
        CHECK(cls == ArcClass::SinkSideTail);
        ++sink_side;
      } else if (head_u) {
        CHECK(cls == ArcClass::SourceSideInternal);
        ++source_side;
      } else {
        CHECK((cls == ArcClass::CrossCutNoSinkPath || cls == ArcClass::PotentiallyIncreasing));
      }
    }
  }
  CHECK(sink_side + source_side > 10);
}

TEST_CASE("the flow-increase fixture exhibits the counter-intuitive phenomenon") {
  std::size_t arc_index = 0;
  TinyInstance t = flow_increase_fixture(&arc_index);
  const SplitNetwork snet = split_nodes(t.net);
  const RestructurePlan none(t.net.restructurable_arcs.size());

  CHECK(max_flow(snet, InterdictionPlan(t.net.nodes.size()), none).value ==
        doctest::Approx(14.0));

  InterdictionPlan y(t.net.nodes.size());
  y.interdicted[3] = 1;  // U1
  const auto c = analyze(t.net, y);
  CHECK(c.flow.value == doctest::Approx(11.0));
  CHECK(classify_arc(c.snet, c.aux, c.cut, arc_index) == ArcClass::PotentiallyIncreasing);

  // Activating the permitted arc strictly raises the flow back to 14.
  const auto w = permissions(t.net, y);
  REQUIRE(w.w_out[arc_index] == 1);
  RestructurePlan plan(t.net.restructurable_arcs.size());
  plan.z_out[arc_index] = 1;
  REQUIRE(feasible(t.net, t.rules, y, plan).feasible);
  CHECK(max_flow(snet, y, plan).value == doctest::Approx(14.0));
}

TEST_CASE("certificates: empty and all-harmless candidate sets") {
  std::size_t arc_index = 0;
  TinyInstance t = flow_increase_fixture(&arc_index);
  InterdictionPlan y(t.net.nodes.size());
  y.interdicted[3] = 1;
  const auto c = analyze(t.net, y);

  CHECK(certify_no_increase(c.snet, c.aux, c.cut, {}));  // vacuous

  // The potentially-increasing arc defeats the certificate.
  const std::vector<std::size_t> candidates{arc_index};
  CHECK(!certify_no_increase(c.snet, c.aux, c.cut, candidates));
}

TEST_CASE("single harmless arcs leave the max flow unchanged exactly") {
  Rng rng(123);
  int harmless_checked = 0;
  for (int trial = 0; trial < 120; ++trial) {
    TinyOptions opts;
    opts.max_nodes = 8;
    opts.max_restruct = 5;
    TinyInstance t = random_tiny(rng, opts);
    if (t.net.restructurable_arcs.empty()) continue;
    InterdictionPlan y(t.net.nodes.size());
    for (auto& v : y.interdicted) v = rng.chance(0.25) ? 1 : 0;
    const auto c = analyze(t.net, y);
    for (std::size_t e = 0; e < t.net.restructurable_arcs.size(); ++e) {
      if (classify_arc(c.snet, c.aux, c.cut, e) == ArcClass::PotentiallyIncreasing) continue;
      RestructurePlan plan(t.net.restructurable_arcs.size());
      plan.z_in[e] = 1;  // activation side does not matter for the flow value
      CHECK(max_flow(c.snet, y, plan).value == doctest::Approx(c.flow.value).epsilon(1e-12));
      ++harmless_checked;
    }
  }
  CHECK(harmless_checked > 50);
}

TEST_CASE("certificate soundness against the brute-force oracle") {
  Rng rng(2024);
  int certified = 0;
  for (int trial = 0; trial < 120; ++trial) {
    TinyOptions opts;
    opts.max_nodes = 8;
    opts.max_restruct = 5;
    TinyInstance t = random_tiny(rng, opts);
    const SplitNetwork snet = split_nodes(t.net);
    InterdictionPlan y(t.net.nodes.size());
    for (auto& v : y.interdicted) v = rng.chance(0.3) ? 1 : 0;

    const auto w = permissions(t.net, y);
    std::vector<std::size_t> candidates;
    for (std::size_t e = 0; e < t.net.restructurable_arcs.size(); ++e)
      if (w.w_in[e] || w.w_out[e]) candidates.push_back(e);

    const auto c = analyze(t.net, y);
    if (certify_no_increase(c.snet, c.aux, c.cut, candidates)) {
      ++certified;
      CHECK(verify_no_increase_bruteforce(t.net, snet, t.rules, y, candidates, 2000000));
    }
  }
  CHECK(certified > 20);
}

TEST_CASE("classification is invariant under uniform capacity scaling") {
  Rng rng(555);
  for (int trial = 0; trial < 30; ++trial) {
    TinyInstance t = random_tiny(rng);
    if (t.net.restructurable_arcs.empty()) continue;
    InterdictionPlan y(t.net.nodes.size());
    for (auto& v : y.interdicted) v = rng.chance(0.25) ? 1 : 0;
    const auto before = analyze(t.net, y);

    TinyInstance scaled = t;
    for (auto& n : scaled.net.nodes) {
      n.capacity *= 4.0;
      n.supply *= 4.0;
      n.demand *= 4.0;
    }
    const auto after = analyze(scaled.net, y);
    for (std::size_t e = 0; e < t.net.restructurable_arcs.size(); ++e)
      CHECK(classify_arc(before.snet, before.aux, before.cut, e) ==
            classify_arc(after.snet, after.aux, after.cut, e));
  }
}

TEST_CASE("theorem-2 companion rule is applied pairwise") {
  // Chain where a cross-cut arc's head also tails another candidate arc.
  LayeredNetwork net;
  net.num_layers = 3;
  NodeRecord s3;
  s3.id = 0;
  s3.layer = 3;
  s3.capacity = 6;
  s3.supply = 6;
  NodeRecord m1;
  m1.id = 1;
  m1.layer = 2;
  m1.capacity = 3;
  NodeRecord m2;
  m2.id = 2;
  m2.layer = 2;
  m2.capacity = 3;
  NodeRecord u1;
  u1.id = 3;
  u1.layer = 1;
  u1.capacity = 3;
  u1.demand = 3;
  NodeRecord u2;
  u2.id = 4;
  u2.layer = 1;
  u2.capacity = 3;
  u2.demand = 3;
  net.nodes = {s3, m1, m2, u1, u2};
  net.arcs = {{0, 1}, {1, 3}};
  net.restructurable_arcs = {{0, 2, 1.0}, {2, 4, 1.0}};
  RestructureRules rules = RestructureRules::from(net, 6.0);

  const SplitNetwork snet = split_nodes(net);
  const InterdictionPlan y(net.nodes.size());
  const RestructurePlan none(net.restructurable_arcs.size());
  const auto flow = max_flow(snet, y, none);
  const auto cut = min_cut(snet, y, none, flow);
  const auto aux = auxiliary(snet, y, none, flow);

  // (0,2) crosses the cut into the unused m2 with no residual path to t only
  // if m2 is cut off; (2,4) then leaves m2 toward an unreached user.
  const ArcClass first = classify_arc(snet, aux, cut, 0);
  const ArcClass second = classify_arc(snet, aux, cut, 1);
  if (first == ArcClass::CrossCutNoSinkPath && second == ArcClass::SinkSideTail) {
    const std::vector<std::size_t> both{0, 1};
    CHECK(!certify_no_increase(snet, aux, cut, both));
    // And indeed activating both together raises the flow.
    RestructurePlan plan(2);
    plan.z_in[0] = 1;
    plan.z_in[1] = 1;
    CHECK(max_flow(snet, y, plan).value > flow.value + 1e-9);
  }
}
