#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "fot/io.hpp"
#include "fot/residual.hpp"
#include "fot/static_mcf.hpp"
#include "fot/walk.hpp"
#include "support/fixtures.hpp"

using namespace fot;
using namespace fot::testing;

namespace {

std::multiset<int> arc_multiset(const Walk& path, const std::vector<Walk>& cycles) {
  std::multiset<int> out(path.arcs.begin(), path.arcs.end());
  for (const Walk& c : cycles) out.insert(c.arcs.begin(), c.arcs.end());
  return out;
}

}  // namespace

TEST_CASE("normalize keeps already-normalized arcs") {
  Network net = fix1();
  NormalizedNetwork norm = normalize_transit_times(net);
  CHECK(norm.is_identity());
  CHECK(norm.base.arc_count() == 1);
  CHECK(norm.base.arc(0).cost == 3);
}

TEST_CASE("normalize subdivides a transit-3 arc into a unit chain") {
  Network net;
  net.node_count = 2;
  net.source = 0;
  net.sink = 1;
  net.arcs.push_back({0, 1, 1, 3, 5});
  NormalizedNetwork norm = normalize_transit_times(net);
  CHECK(norm.base.node_count == 4);
  REQUIRE(norm.subdivision[0].size() == 3);
  Transit total_transit = 0;
  Cost total_cost = 0;
  for (ArcId a : norm.subdivision[0]) {
    CHECK(norm.base.arc(a).transit == 1);
    CHECK(norm.base.arc(a).capacity == 1);
    total_transit += norm.base.arc(a).transit;
    total_cost += norm.base.arc(a).cost;
  }
  CHECK(total_transit == 3);
  CHECK(total_cost == 5);
  CHECK(norm.base.arc(norm.subdivision[0][1]).cost == 0);
}

TEST_CASE("normalization preserves static min-cost max-flow cost") {
  auto check_preserved = [](const Network& net) {
    auto mcmf_cost = [](const Network& n) {
      // max flow, then cancel negative residual cycles by cost
      StaticFlow x = max_flow(n);
      Network with_flow = n;
      for (int guard = 0; guard < 100000; ++guard) {
        ResidualGraph rv = residual(n, x);
        auto cyc = find_negative_cycle(rv, residual_cost_weights(rv));
        if (!cyc) break;
        x = augment_cycle(n, x, rv, *cyc, cycle_capacity(rv, *cyc));
      }
      return std::make_pair(x.value, flow_cost(n, x));
    };
    NormalizedNetwork norm = normalize_transit_times(net);
    auto [v1, c1] = mcmf_cost(net);
    auto [v2, c2] = mcmf_cost(norm.base);
    CHECK(v1 == v2);
    CHECK(c1 == c2);
  };
  check_preserved(fix2());
  Network slow;  // a transit-3 arc in parallel with a unit arc
  slow.node_count = 2;
  slow.source = 0;
  slow.sink = 1;
  slow.arcs.push_back({0, 1, 2, 3, 4});
  slow.arcs.push_back({0, 1, 1, 1, -2});
  check_preserved(slow);
}

TEST_CASE("residual of the zero flow is the original network") {
  Network net = fix2();
  StaticFlow x = zero_flow(net);
  ResidualGraph rv = residual(net, x);
  CHECK(rv.arc_count() == 3);
  for (int r = 0; r < rv.arc_count(); ++r) {
    CHECK_FALSE(rv.arc(r).backward);
    CHECK(rv.arc(r).capacity == net.arc(rv.arc(r).base).capacity);
  }
}

TEST_CASE("residual of a saturated arc is only the backward arc") {
  Network net = fix1();
  StaticFlow x = zero_flow(net);
  x[0] = 2;
  x.value = 2;
  ResidualGraph rv = residual(net, x);
  REQUIRE(rv.arc_count() == 1);
  CHECK(rv.arc(0).backward);
  CHECK(rv.arc(0).capacity == 2);
  CHECK(rv.arc(0).cost == -3);
  CHECK(rv.arc(0).transit == -1);
}

TEST_CASE("residual of the unit fix2 routing exposes the cheap swap cycle") {
  Network net = fix2();
  StaticFlow x = zero_flow(net);
  x[0] = 1;
  x[1] = 1;
  x.value = 1;
  ResidualGraph rv = residual(net, x);
  // backward s->v, backward b1, forward b2
  CHECK(rv.find(0, true) >= 0);
  CHECK(rv.find(1, true) >= 0);
  CHECK(rv.find(2, false) >= 0);
  CHECK(rv.find(0, false) == -1);
  std::vector<int> cycle{rv.find(2, false), rv.find(1, true)};
  CHECK(cycle_cost(rv, cycle) == -10);
  CHECK(cycle_transit(rv, cycle) == 0);
}

TEST_CASE("residual rejects infeasible flows") {
  Network net = fix2();
  StaticFlow x = zero_flow(net);
  x[0] = 2;  // above capacity
  CHECK_THROWS_AS(residual(net, x), Error);
  StaticFlow y = zero_flow(net);
  y[0] = 1;  // conservation broken at v
  CHECK_THROWS_AS(residual(net, y), Error);
}

TEST_CASE("walk decomposition of a simple path returns it unchanged") {
  Network net = fix2();
  ResidualGraph rv = residual(net, zero_flow(net));
  Walk w = walk_from_arcs({rv.find(0, false), rv.find(1, false)}, arc_ends(rv));
  auto dec = decompose_walk(w, arc_ends(rv));
  CHECK(dec.cycles.empty());
  CHECK(dec.path.arcs == w.arcs);
}

TEST_CASE("closed walk decomposes into cycles with an empty path") {
  Network net = fix3();
  ResidualGraph rv = residual(net, zero_flow(net));
  Walk w = walk_from_arcs({rv.find(1, false), rv.find(2, false)}, arc_ends(rv));
  REQUIRE(w.closed());
  auto dec = decompose_walk(w, arc_ends(rv));
  CHECK(dec.path.arcs.empty());
  REQUIRE(dec.cycles.size() == 1);
  CHECK(dec.cycles[0].arcs.size() == 2);
}

TEST_CASE("first-revisit removal peels the inner loop") {
  // s -> v -> w -> v -> t over explicit arcs
  Network net;
  net.node_count = 4;
  net.source = 0;
  net.sink = 3;
  net.arcs.push_back({0, 1, 1, 0, 0});
  net.arcs.push_back({1, 2, 1, 0, 0});
  net.arcs.push_back({2, 1, 1, 0, 0});
  net.arcs.push_back({1, 3, 1, 0, 0});
  ResidualGraph rv = residual(net, zero_flow(net));
  Walk w = walk_from_arcs({0, 1, 2, 3}, arc_ends(rv));
  auto dec = decompose_walk(w, arc_ends(rv));
  REQUIRE(dec.cycles.size() == 1);
  CHECK(dec.cycles[0].arcs == std::vector<int>{1, 2});
  CHECK(dec.path.arcs == std::vector<int>{0, 3});
}

TEST_CASE("walk decomposition round-trip preserves the arc multiset") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    GenParams params;
    params.nodes = 2 + static_cast<int>(rng() % 5);
    params.arcs = 1 + static_cast<int>(rng() % 9);
    params.seed = rng();
    Generated gen = generate_instance(params);
    ResidualGraph rv = residual(gen.instance.net, zero_flow(gen.instance.net));
    Walk w = random_walk(rv, rng, 12);
    if (w.arcs.empty()) continue;
    auto dec = decompose_walk(w, arc_ends(rv));
    CHECK(arc_multiset(dec.path, dec.cycles) ==
          std::multiset<int>(w.arcs.begin(), w.arcs.end()));
  }
}

TEST_CASE("eulerian decomposition handles empty, single cycle and figure eight") {
  Network net;
  net.node_count = 3;
  net.source = 0;
  net.sink = 1;
  net.arcs.push_back({0, 1, 1, 0, 0});
  net.arcs.push_back({1, 0, 1, 0, 0});
  net.arcs.push_back({0, 2, 1, 0, 0});
  net.arcs.push_back({2, 0, 1, 0, 0});
  ResidualGraph rv = residual(net, zero_flow(net));

  IncidenceVector empty = zero_incidence(rv.arc_count());
  CHECK(decompose_eulerian(empty, net.node_count, arc_ends(rv)).empty());

  IncidenceVector one = zero_incidence(rv.arc_count());
  one[rv.find(0, false)] = 1;
  one[rv.find(1, false)] = 1;
  auto single = decompose_eulerian(one, net.node_count, arc_ends(rv));
  REQUIRE(single.size() == 1);
  CHECK(single[0].size() == 2);

  IncidenceVector eight = zero_incidence(rv.arc_count());
  for (int r = 0; r < rv.arc_count(); ++r) eight[r] = 1;
  auto both = decompose_eulerian(eight, net.node_count, arc_ends(rv));
  REQUIRE(both.size() == 2);
  std::multiset<int> seen;
  for (const auto& cyc : both) seen.insert(cyc.begin(), cyc.end());
  std::multiset<int> want{0, 1, 2, 3};
  CHECK(seen == want);
}

TEST_CASE("eulerian decomposition rejects unbalanced multisets") {
  Network net = fix2();
  ResidualGraph rv = residual(net, zero_flow(net));
  IncidenceVector h = zero_incidence(rv.arc_count());
  h[0] = 1;  // a single arc is never balanced
  CHECK_THROWS_AS(decompose_eulerian(h, net.node_count, arc_ends(rv)), Error);
}

TEST_CASE("eulerian decomposition reassembles random balanced multisets") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    GenParams params;
    params.nodes = 2 + static_cast<int>(rng() % 5);
    params.arcs = 2 + static_cast<int>(rng() % 8);
    params.seed = rng();
    Generated gen = generate_instance(params);
    ResidualGraph rv = residual(gen.instance.net, zero_flow(gen.instance.net));
    // Build a balanced multiset by overlaying random closed walks.
    IncidenceVector h = zero_incidence(rv.arc_count());
    auto out = rv.out_arcs();
    for (int k = 0; k < 3; ++k) {
      Walk w = random_walk(rv, rng, 10);
      if (w.arcs.empty()) continue;
      auto dec = decompose_walk(w, arc_ends(rv));
      for (const Walk& c : dec.cycles)
        for (int r : c.arcs) h[r] += 1;
    }
    auto cycles = decompose_eulerian(h, rv.node_count, arc_ends(rv));
    IncidenceVector sum = zero_incidence(rv.arc_count());
    for (const auto& cyc : cycles) {
      Walk w = walk_from_arcs(cyc, arc_ends(rv));
      CHECK(w.is_cycle());
      for (int r : cyc) sum[r] += 1;
    }
    CHECK(sum.mult == h.mult);
  }
}

TEST_CASE("unit expansion copies arcs by residual capacity") {
  Network net = fix2();
  ResidualGraph rv = residual(net, zero_flow(net));
  UnitExpansion ex = unit_capacity_expansion(rv);
  CHECK(ex.arc_count() == 3);  // sum of capacities

  Network wide;
  wide.node_count = 2;
  wide.source = 0;
  wide.sink = 1;
  wide.arcs.push_back({0, 1, 3, 0, 2});
  ResidualGraph rw = residual(wide, zero_flow(wide));
  UnitExpansion exw = unit_capacity_expansion(rw);
  CHECK(exw.arc_count() == 3);
  for (int i = 0; i < exw.arc_count(); ++i)
    CHECK(rw.arc(exw.origin[static_cast<size_t>(i)]).cost == 2);

  Network inf;
  inf.node_count = 2;
  inf.source = 0;
  inf.sink = 1;
  inf.arcs.push_back({0, 1, kInfCap, 0, 0});
  ResidualGraph ri = residual(inf, zero_flow(inf));
  CHECK_THROWS_AS(unit_capacity_expansion(ri), Error);
  CHECK(unit_capacity_expansion(ri, 4).arc_count() == 4);
}

TEST_CASE("augmentation moves cost by amount times cycle cost, exactly") {
  Network net = fix2();
  StaticFlow x = zero_flow(net);
  x[0] = 1;
  x[1] = 1;
  x.value = 1;
  ResidualGraph rv = residual(net, x);
  std::vector<int> cycle{rv.find(2, false), rv.find(1, true)};
  Cost before = flow_cost(net, x);
  StaticFlow y = augment_cycle(net, x, rv, cycle, cycle_capacity(rv, cycle));
  CHECK(flow_cost(net, y) == before - 10);
  CHECK(y.value == x.value);

  StaticFlow same = augment_cycle(net, x, rv, cycle, 0);
  CHECK(same.on_arc == x.on_arc);

  CHECK_THROWS_AS(augment_cycle(net, x, rv, cycle, 2), Error);
}

TEST_CASE("residual symmetry after augmenting along a cycle") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    GenParams params;
    params.nodes = 3 + static_cast<int>(rng() % 4);
    params.arcs = 3 + static_cast<int>(rng() % 7);
    params.seed = rng();
    Network net = generate_instance(params).instance.net;
    StaticFlow x = max_flow(net);
    ResidualGraph rv = residual(net, x);
    auto all_cycles = enumerate_simple_cycles(rv, 100000);
    std::vector<std::vector<int>> cycles;
    for (const auto& c : all_cycles) {
      std::set<ArcId> bases;
      bool two_way = false;
      for (int r : c)
        if (!bases.insert(rv.arc(r).base).second) two_way = true;
      if (!two_way) cycles.push_back(c);  // opposite-direction pairs cancel; skip them
    }
    if (cycles.empty()) continue;
    const auto& cyc = cycles[rng() % cycles.size()];
    Cap amount = cycle_capacity(rv, cyc);
    StaticFlow y = augment_cycle(net, x, rv, cyc, amount);
    ResidualGraph rv2 = residual(net, y);
    for (int r : cyc) {
      const ResidualArc& ra = rv.arc(r);
      int fwd = rv2.find(ra.base, ra.backward);
      Cap left = fwd < 0 ? 0 : rv2.arc(fwd).capacity;
      CHECK(left == ra.capacity - amount);
      int bwd = rv2.find(ra.base, !ra.backward);
      Cap back_before = rv.find(ra.base, !ra.backward) < 0
                            ? 0
                            : rv.arc(rv.find(ra.base, !ra.backward)).capacity;
      CHECK((bwd < 0 ? 0 : rv2.arc(bwd).capacity) == back_before + amount);
    }
  }
}
