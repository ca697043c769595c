#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "fot/io.hpp"
#include "fot/static_mcf.hpp"
#include "support/fixtures.hpp"

using namespace fot;
using namespace fot::testing;

TEST_CASE("max flow values on the fixtures") {
  CHECK(max_flow(fix1()).value == 2);
  CHECK(max_flow(fix2()).value == 1);
  Network disconnected;
  disconnected.node_count = 3;
  disconnected.source = 0;
  disconnected.sink = 2;
  disconnected.arcs.push_back({1, 2, 5, 0, 0});
  CHECK(max_flow(disconnected).value == 0);
}

TEST_CASE("min-cost circulation is zero when all weights are nonnegative") {
  Network net = fix2();
  std::vector<Cost> w{1, 2, 3};
  StaticFlow circ = min_cost_circulation(net, w);
  CHECK(circ.on_arc == std::vector<Cap>{0, 0, 0});
}

TEST_CASE("min-cost circulation cancels the fix3 source cycle") {
  Network net = fix3();
  std::vector<Cost> w{0, 2, -5};
  StaticFlow circ = min_cost_circulation(net, w);
  CHECK(circ[1] == 1);
  CHECK(circ[2] == 1);
  CHECK(circ[0] == 0);
  Cost weight = 0;
  for (ArcId a = 0; a < net.arc_count(); ++a) weight += w[static_cast<size_t>(a)] * circ[a];
  CHECK(weight == -3);
}

TEST_CASE("circulation with a return arc routes one unit by transit") {
  // The classic reduction: sink-to-source arc of weight -theta.
  Network net = fix2();
  net.arcs.push_back({2, 0, 3, 0, 0});
  std::vector<Cost> w{1, 1, 1, -5};
  StaticFlow circ = min_cost_circulation(net, w);
  CHECK(circ[3] == 1);     // one unit of value
  CHECK(circ[0] == 1);
  CHECK(circ[1] + circ[2] == 1);
  ResidualGraph rv = residual(net, circ);
  std::vector<Cost> res_w(static_cast<size_t>(rv.arc_count()));
  for (int r = 0; r < rv.arc_count(); ++r) {
    const ResidualArc& ra = rv.arc(r);
    res_w[static_cast<size_t>(r)] =
        ra.backward ? -w[static_cast<size_t>(ra.base)] : w[static_cast<size_t>(ra.base)];
  }
  CHECK_FALSE(find_negative_cycle(rv, res_w).has_value());
}

TEST_CASE("circulation detects unbounded negative cycles") {
  Network net;
  net.node_count = 2;
  net.source = 0;
  net.sink = 1;
  net.arcs.push_back({0, 1, kInfCap, 0, 0});
  net.arcs.push_back({1, 0, kInfCap, 0, 0});
  std::vector<Cost> w{1, -2};
  CHECK_THROWS_AS(min_cost_circulation(net, w), Error);
}

TEST_CASE("negative cycle detection on the fix2 residual") {
  Network net = fix2();
  StaticFlow x = zero_flow(net);
  x[0] = 1;
  x[1] = 1;
  x.value = 1;
  ResidualGraph rv = residual(net, x);
  auto cyc = find_negative_cycle(rv, residual_cost_weights(rv));
  REQUIRE(cyc.has_value());
  CHECK(cycle_cost(rv, *cyc) == -10);
  CHECK(cycle_transit(rv, *cyc) == 0);
}

TEST_CASE("negative cycle detection certifies clean graphs") {
  Network net = fix2();
  ResidualGraph rv = residual(net, zero_flow(net));
  CHECK_FALSE(find_negative_cycle(rv, residual_cost_weights(rv)).has_value());
}

TEST_CASE("negative two-cycle is found") {
  Network net;
  net.node_count = 3;
  net.source = 0;
  net.sink = 2;
  net.arcs.push_back({0, 1, 1, 0, 3});
  net.arcs.push_back({1, 0, 1, 0, -4});
  net.arcs.push_back({1, 2, 1, 0, 0});
  ResidualGraph rv = residual(net, zero_flow(net));
  auto cyc = find_negative_cycle(rv, residual_cost_weights(rv));
  REQUIRE(cyc.has_value());
  CHECK(cyc->size() == 2);
  CHECK(cycle_cost(rv, *cyc) == -1);
}

TEST_CASE("flow decomposition of the fixtures") {
  Network net1 = fix1();
  StaticFlow x1 = max_flow(net1);
  auto dec1 = decompose_flow(net1, x1);
  REQUIRE(dec1.paths.size() == 1);
  CHECK(dec1.paths[0].rate == 2);
  CHECK(dec1.cycles.empty());

  Network net2 = fix2();
  StaticFlow x2 = max_flow(net2);
  auto dec2 = decompose_flow(net2, x2);
  REQUIRE(dec2.paths.size() == 1);
  CHECK(dec2.paths[0].rate == 1);
  CHECK(dec2.paths[0].walk.nodes == std::vector<NodeId>{0, 1, 2});

  // circulation-only flow: no paths, at least one cycle
  Network net3 = fix3();
  StaticFlow circ = zero_flow(net3);
  circ[1] = 1;
  circ[2] = 1;
  auto dec3 = decompose_flow(net3, circ);
  CHECK(dec3.paths.empty());
  CHECK(dec3.cycles.size() == 1);
}

TEST_CASE("flow decomposition respects the flow value with return circulations") {
  Network net;
  net.node_count = 2;
  net.source = 0;
  net.sink = 1;
  net.arcs.push_back({0, 1, 3, 0, 0});
  net.arcs.push_back({1, 0, 2, 0, 0});
  StaticFlow x = zero_flow(net);
  x[0] = 3;
  x[1] = 2;
  x.value = 1;
  auto dec = decompose_flow(net, x);
  Cap path_rates = 0;
  for (const auto& p : dec.paths) path_rates += p.rate;
  CHECK(path_rates == 1);
  CHECK(dec.cycles.size() == 1);
  CHECK(dec.cycles[0].rate == 2);
}

TEST_CASE("superposition of the decomposition reproduces random flows") {
  std::mt19937_64 rng(31);
  int done = 0;
  for (int trial = 0; done < 60 && trial < 400; ++trial) {
    GenParams params;
    params.nodes = 3 + static_cast<int>(rng() % 4);
    params.arcs = 3 + static_cast<int>(rng() % 8);
    params.seed = rng();
    Network net = generate_instance(params).instance.net;
    StaticFlow x = max_flow(net);
    if (x.value == 0) continue;
    ++done;
    auto dec = decompose_flow(net, x);
    StaticFlow sum = zero_flow(net);
    Cap rates = 0;
    for (const auto& p : dec.paths) {
      for (ArcId a : p.walk.arcs) sum[a] += p.rate;
      rates += p.rate;
    }
    for (const auto& c : dec.cycles)
      for (ArcId a : c.walk.arcs) sum[a] += c.rate;
    CHECK(sum.on_arc == x.on_arc);
    CHECK(rates == x.value);
  }
  CHECK(done > 0);
}

TEST_CASE("reachability partition on the fixtures") {
  Network net1 = fix1();
  StaticFlow x1 = max_flow(net1);
  auto part1 = reachability_partition(net1, x1);
  CHECK(part1.in_source_part(0));
  CHECK(part1.in_sink_part(1));
  for (NodeId v = 0; v < net1.node_count; ++v) CHECK_FALSE(part1.between[static_cast<size_t>(v)]);

  Network net3 = fix3();
  StaticFlow x3 = max_flow(net3);
  auto part3 = reachability_partition(net3, x3);
  CHECK(part3.in_source_part(0));
  CHECK(part3.in_source_part(2));  // the side cycle keeps x reachable
  CHECK(part3.in_sink_part(1));
}

TEST_CASE("partition rejects non-maximum flows") {
  Network net = fix1();
  CHECK_THROWS_AS(reachability_partition(net, zero_flow(net)), Error);
}

TEST_CASE("partition is invariant under residual-cycle augmentation") {
  std::mt19937_64 rng(41);
  int done = 0;
  for (int trial = 0; done < 40 && trial < 400; ++trial) {
    GenParams params;
    params.nodes = 3 + static_cast<int>(rng() % 4);
    params.arcs = 4 + static_cast<int>(rng() % 7);
    params.seed = rng();
    Network net = generate_instance(params).instance.net;
    StaticFlow x = max_flow(net);
    ResidualGraph rv = residual(net, x);
    auto cycles = enumerate_simple_cycles(rv, 100000);
    if (cycles.empty()) continue;
    ++done;
    auto before = reachability_partition(net, x);
    const auto& cyc = cycles[rng() % cycles.size()];
    StaticFlow y = augment_cycle(net, x, rv, cyc, cycle_capacity(rv, cyc));
    auto after = reachability_partition(net, y);
    CHECK(before.from_source == after.from_source);
    CHECK(before.to_sink == after.to_sink);
  }
  CHECK(done > 0);
}

TEST_CASE("cut arcs on the fixtures") {
  CutArcSet cut1 = cut_arcs(fix1());
  CHECK(cut1.arcs == std::vector<ArcId>{0});

  CutArcSet cut2 = cut_arcs(fix2());
  CHECK(cut2.arcs == std::vector<ArcId>{0});  // only the bottleneck

  Network two_paths;  // two arc-disjoint unit paths
  two_paths.node_count = 4;
  two_paths.source = 0;
  two_paths.sink = 3;
  two_paths.arcs.push_back({0, 1, 1, 0, 0});
  two_paths.arcs.push_back({1, 3, 1, 0, 0});
  two_paths.arcs.push_back({0, 2, 1, 0, 0});
  two_paths.arcs.push_back({2, 3, 1, 0, 0});
  CutArcSet cut3 = cut_arcs(two_paths);
  CHECK(cut3.mask == brute_force_cut_arcs(two_paths));
}

TEST_CASE("cut arcs match brute force on random instances") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 120; ++trial) {
    GenParams params;
    params.nodes = 2 + static_cast<int>(rng() % 7);
    params.arcs = 1 + static_cast<int>(rng() % 10);
    params.seed = rng();
    Network net = generate_instance(params).instance.net;
    CHECK(cut_arcs(net).mask == brute_force_cut_arcs(net));
  }
}

TEST_CASE("lex-min eulerian search finds nothing in clean residuals") {
  Network net = fix2();
  StaticFlow x = max_flow(net);
  // route via the free arc to avoid negative cycles
  if (x[1] == 1) {
    ResidualGraph rv0 = residual(net, x);
    auto cyc = find_negative_cycle(rv0, residual_cost_weights(rv0));
    if (cyc) x = augment_cycle(net, x, rv0, *cyc, 1);
  }
  auto part = reachability_partition(net, x);
  ResidualGraph rv = residual(net, x);
  CHECK_FALSE(lex_min_eulerian_subgraph(rv, part).has_value());
}

TEST_CASE("lex-min eulerian search finds the fix3 source cycle") {
  Network net = fix3();
  StaticFlow x = max_flow(net);
  auto part = reachability_partition(net, x);
  ResidualGraph rv = residual(net, x);
  auto found = lex_min_eulerian_subgraph(rv, part);
  REQUIRE(found.has_value());
  CHECK(found->cost == -3);
  CHECK(found->transit == 2);
  auto cycles = decompose_eulerian(found->subgraph, net.node_count, arc_ends(rv));
  REQUIRE(cycles.size() == 1);
  CHECK(cycles[0].size() == 2);
}

TEST_CASE("two disjoint negative source-side cycles are both selected") {
  Network net;
  net.node_count = 5;  // s, t, x, y and the direct arc s->t
  net.source = 0;
  net.sink = 1;
  net.arcs.push_back({0, 1, 1, 1, 0});    // s->t
  net.arcs.push_back({0, 2, 1, 1, 1});    // s->x
  net.arcs.push_back({2, 0, 1, 1, -3});   // x->s
  net.arcs.push_back({0, 3, 1, 1, 2});    // s->y
  net.arcs.push_back({3, 0, 1, 1, -4});   // y->s
  StaticFlow x = max_flow(net);
  auto part = reachability_partition(net, x);
  ResidualGraph rv = residual(net, x);
  auto found = lex_min_eulerian_subgraph(rv, part);
  REQUIRE(found.has_value());
  CHECK(found->cost == -4);  // both cycles: (1-3) + (2-4)
  auto cycles = decompose_eulerian(found->subgraph, net.node_count, arc_ends(rv));
  CHECK(cycles.size() == 2);
}
