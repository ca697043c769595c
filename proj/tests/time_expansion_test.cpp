#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "fot/construction.hpp"
#include "fot/time_expansion.hpp"
#include "support/fixtures.hpp"

using namespace fot;
using namespace fot::testing;

namespace {

// The temporally repeated flow on fix1 at horizon 4: both units on every copy.
FlowOverTime fix1_repeated(const TimeExpandedNetwork& ten) {
  static StaticFlow f;
  f = zero_flow(ten.net);
  for (int layer = 1; layer <= 3; ++layer) f[ten.copy_arc(0, layer)] = 2;
  for (ArcId a = 0; a < ten.net.arc_count(); ++a) {
    const auto& inf = ten.info[static_cast<size_t>(a)];
    if (inf.kind == TimeExpandedNetwork::ArcKind::FromSuperSource && inf.layer <= 3)
      f[a] = 2;
    if (inf.kind == TimeExpandedNetwork::ArcKind::ToSuperSink && inf.layer >= 2) f[a] = 2;
  }
  f.value = flow_value(ten.net, f);
  return {&ten, f};
}

}  // namespace

TEST_CASE("time expansion of fix1 at horizon 4") {
  NormalizedNetwork norm = normalize_transit_times(fix1());
  TimeExpandedNetwork ten = build_time_expanded(norm, 4);
  CHECK(ten.net.node_count == 10);  // 2*4 copies plus the two super nodes
  int copies = 0, from_source = 0, to_sink = 0;
  for (const auto& inf : ten.info) {
    if (inf.kind == TimeExpandedNetwork::ArcKind::Copy) ++copies;
    if (inf.kind == TimeExpandedNetwork::ArcKind::FromSuperSource) ++from_source;
    if (inf.kind == TimeExpandedNetwork::ArcKind::ToSuperSink) ++to_sink;
  }
  CHECK(copies == 3);
  CHECK(from_source == 4);
  CHECK(to_sink == 4);
  for (ArcId a = 0; a < ten.net.arc_count(); ++a)
    if (ten.info[static_cast<size_t>(a)].kind == TimeExpandedNetwork::ArcKind::Copy)
      CHECK(ten.net.arc(a).cost == 3);
}

TEST_CASE("horizon 2 yields exactly one copy of a unit-transit arc") {
  NormalizedNetwork norm = normalize_transit_times(fix1());
  TimeExpandedNetwork ten = build_time_expanded(norm, 2);
  int copies = 0;
  for (const auto& inf : ten.info)
    if (inf.kind == TimeExpandedNetwork::ArcKind::Copy) ++copies;
  CHECK(copies == 1);
  CHECK(ten.copy_arc(0, 1) >= 0);
  CHECK(ten.copy_arc(0, 2) == -1);
}

TEST_CASE("horizon below 2 is rejected") {
  NormalizedNetwork norm = normalize_transit_times(fix1());
  CHECK_THROWS_AS(build_time_expanded(norm, 1), Error);
}

TEST_CASE("zero flow is repeated on the whole horizon") {
  NormalizedNetwork norm = normalize_transit_times(fix2());
  TimeExpandedNetwork ten = build_time_expanded(norm, 7);
  FlowOverTime f{&ten, zero_flow(ten.net)};
  auto ivs = check_repeated(f);
  REQUIRE(ivs.size() == 1);
  CHECK(ivs[0].theta1 == 1);
  CHECK(ivs[0].theta2 == 7);
}

TEST_CASE("fix1 temporally repeated flow is repeated on [1,3]") {
  NormalizedNetwork norm = normalize_transit_times(fix1());
  TimeExpandedNetwork ten = build_time_expanded(norm, 4);
  FlowOverTime f = fix1_repeated(ten);
  auto ivs = check_repeated(f);
  REQUIRE(ivs.size() == 1);
  CHECK(ivs[0].theta1 == 1);
  CHECK(ivs[0].theta2 == 3);
  CHECK(ivs[0].pattern[0] == 2);
}

TEST_CASE("a perturbed layer splits the repeated interval in two") {
  NormalizedNetwork norm = normalize_transit_times(fix1());
  TimeExpandedNetwork ten = build_time_expanded(norm, 9);
  StaticFlow f = zero_flow(ten.net);
  f[ten.copy_arc(0, 4)] = 1;  // single perturbed layer, conservation via supers
  for (ArcId a = 0; a < ten.net.arc_count(); ++a) {
    const auto& inf = ten.info[static_cast<size_t>(a)];
    if (inf.kind == TimeExpandedNetwork::ArcKind::FromSuperSource && inf.layer == 4) f[a] = 1;
    if (inf.kind == TimeExpandedNetwork::ArcKind::ToSuperSink && inf.layer == 5) f[a] = 1;
  }
  FlowOverTime fot{&ten, f};
  auto ivs = check_repeated(fot);
  REQUIRE(ivs.size() == 2);
  CHECK(ivs[0].theta1 == 1);
  CHECK(ivs[0].theta2 == 3);
  CHECK(ivs[1].theta1 == 5);
  CHECK(ivs[1].theta2 == 9);
}

TEST_CASE("phi projection reads the pattern and conserves flow") {
  NormalizedNetwork norm = normalize_transit_times(fix1());
  TimeExpandedNetwork ten = build_time_expanded(norm, 4);
  FlowOverTime f = fix1_repeated(ten);
  auto ivs = check_repeated(f);
  REQUIRE_FALSE(ivs.empty());
  StaticFlow x = phi_project(f, ivs[0], norm.base);
  CHECK(x[0] == 2);
  CHECK(x.value == 2);

  FlowOverTime zero{&ten, zero_flow(ten.net)};
  auto zero_ivs = check_repeated(zero);
  StaticFlow xz = phi_project(zero, zero_ivs[0], norm.base);
  CHECK(xz.on_arc == std::vector<Cap>{0});
}

TEST_CASE("phi projection of the seed is a static maximum flow") {
  NormalizedNetwork norm = normalize_transit_times(fix2());
  TimeExpandedNetwork ten = build_time_expanded(norm, 9);
  SeedResult seed = ford_fulkerson_seed(norm, ten);
  FlowOverTime f{&ten, seed.ten_flow};
  auto ivs = check_repeated(f);
  REQUIRE_FALSE(ivs.empty());
  StaticFlow x = phi_project(f, ivs[0], norm.base);
  CHECK(x.value == max_flow(norm.base).value);
  CHECK(is_maximum(norm.base, x));
}

TEST_CASE("stale interval certificates are rejected") {
  NormalizedNetwork norm = normalize_transit_times(fix1());
  TimeExpandedNetwork ten = build_time_expanded(norm, 4);
  FlowOverTime f = fix1_repeated(ten);
  auto ivs = check_repeated(f);
  RepeatedInterval stale = ivs[0];
  stale.pattern[0] = 1;
  CHECK_THROWS_AS(phi_project(f, stale, norm.base), Error);
}

TEST_CASE("bands select layer ranges plus super arcs in range") {
  NormalizedNetwork norm = normalize_transit_times(fix1());
  TimeExpandedNetwork ten = build_time_expanded(norm, 4);
  BandView whole = band(ten, 1, 4);
  CHECK(whole.arcs.size() == static_cast<size_t>(ten.net.arc_count()));

  BandView mid = band(ten, 2, 3);
  int copies = 0, supers = 0;
  for (ArcId a : mid.arcs) {
    if (ten.info[static_cast<size_t>(a)].kind == TimeExpandedNetwork::ArcKind::Copy)
      ++copies;
    else
      ++supers;
  }
  CHECK(copies == 1);  // only the copy at layer 2 fits inside [2,3]
  CHECK(supers == 8);  // four reservoir arcs per layer, two layers in range
  CHECK_THROWS_AS(band(ten, 3, 2), Error);
  CHECK_THROWS_AS(band(ten, 0, 2), Error);
}

TEST_CASE("band composition covers the full band") {
  NormalizedNetwork norm = normalize_transit_times(fix2());
  TimeExpandedNetwork ten = build_time_expanded(norm, 8);
  BandView left = band(ten, 1, 4);
  BandView right = band(ten, 4, 8);
  BandView all = band(ten, 1, 8);
  std::set<ArcId> joined(left.arcs.begin(), left.arcs.end());
  joined.insert(right.arcs.begin(), right.arcs.end());
  std::set<ArcId> want(all.arcs.begin(), all.arcs.end());
  CHECK(joined == want);
}

TEST_CASE("flow value and cost on the fix1 repeated flow") {
  NormalizedNetwork norm = normalize_transit_times(fix1());
  TimeExpandedNetwork ten = build_time_expanded(norm, 4);
  FlowOverTime f = fix1_repeated(ten);
  CHECK(flow_value(f) == 6);
  CHECK(flow_cost(f) == 18);
  FlowOverTime zero{&ten, zero_flow(ten.net)};
  CHECK(flow_cost(zero) == 0);
}

TEST_CASE("repeated band slices are isomorphic") {
  NormalizedNetwork norm = normalize_transit_times(fix2());
  TimeExpandedNetwork ten = build_time_expanded(norm, 9);
  SeedResult seed = ford_fulkerson_seed(norm, ten);
  FlowOverTime f{&ten, seed.ten_flow};
  auto ivs = check_repeated(f);
  REQUIRE_FALSE(ivs.empty());
  const RepeatedInterval& iv = ivs[0];
  // Collect (base arc, direction, residual) per layer slice; all slices of
  // the repeated interval must agree.
  ResidualGraph rv = residual(ten.net, f.flow);
  auto slice = [&](int layer) {
    std::set<std::tuple<ArcId, bool, Cap>> arcs;
    for (int r = 0; r < rv.arc_count(); ++r) {
      const auto& inf = ten.info[static_cast<size_t>(rv.arc(r).base)];
      if (inf.kind != TimeExpandedNetwork::ArcKind::Copy || inf.layer != layer) continue;
      arcs.insert({inf.base, rv.arc(r).backward, rv.arc(r).capacity});
    }
    return arcs;
  };
  auto first = slice(iv.theta1);
  for (int layer = iv.theta1; layer <= iv.theta2 - 1; ++layer) CHECK(slice(layer) == first);
}
