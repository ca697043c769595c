#pragma once

#include <vector>

#include "fot/network.hpp"
#include "fot/residual.hpp"

namespace fot {

// Static expansion of a normalized network over `horizon` layers, with a
// super source feeding every copy of the source and a super sink draining
// every copy of the sink. Copies exist for layers 1..horizon-1 and inherit
// capacity and cost; super arcs have infinite capacity and zero cost.
// The terminals are reservoirs: the source also absorbs returning flow and
// the sink can lend flow back, so both directions exist at every layer.
struct TimeExpandedNetwork {
  Network net;
  int horizon = 0;
  int base_node_count = 0;
  int base_arc_count = 0;
  NodeId base_source = -1;
  NodeId base_sink = -1;

  enum class ArcKind { Copy, FromSuperSource, IntoSuperSource, ToSuperSink, FromSuperSink };
  struct ArcInfo {
    ArcKind kind = ArcKind::Copy;
    ArcId base = -1;  // base arc for copies
    int layer = 0;    // tail layer for copies; attached layer for super arcs
  };
  std::vector<ArcInfo> info;
  std::vector<std::vector<ArcId>> copy_of;  // base arc -> per-layer ten arc (index layer-1)

  NodeId super_source() const { return net.source; }
  NodeId super_sink() const { return net.sink; }
  bool is_super(NodeId v) const { return v == net.source || v == net.sink; }
  NodeId node_at(NodeId base_v, int layer) const {
    return 2 + (layer - 1) * base_node_count + base_v;
  }
  NodeId base_node(NodeId ten_v) const { return (ten_v - 2) % base_node_count; }
  int layer_of(NodeId ten_v) const { return (ten_v - 2) / base_node_count + 1; }
  ArcId copy_arc(ArcId base_a, int layer) const {
    const auto& per_layer = copy_of[static_cast<size_t>(base_a)];
    if (layer < 1 || layer > static_cast<int>(per_layer.size())) return -1;
    return per_layer[static_cast<size_t>(layer - 1)];
  }
};

TimeExpandedNetwork build_time_expanded(const NormalizedNetwork& norm, int horizon);

struct FlowOverTime {
  const TimeExpandedNetwork* ten = nullptr;
  StaticFlow flow;
};

Cap flow_value(const FlowOverTime& f);
Cost flow_cost(const FlowOverTime& f);

// Per-base-arc flow at a layer; zero beyond the horizon (no flow survives it).
Cap layer_value(const FlowOverTime& f, ArcId base_arc, int layer);

struct RepeatedInterval {
  int theta1 = 0;
  int theta2 = 0;                 // theta2 - theta1 >= 2
  std::vector<Cap> pattern;       // base arc -> constant flow value on the interval

  int span() const { return theta2 - theta1; }
  bool contains(int layer) const { return theta1 <= layer && layer <= theta2; }
};

// All maximal intervals on which the flow is repeated (length >= 2).
std::vector<RepeatedInterval> check_repeated(const FlowOverTime& f);

bool interval_still_repeated(const FlowOverTime& f, const RepeatedInterval& iv);

// Static flow on the base network read off layer theta1 of a repeated flow.
// Throws NotRepeated when the interval no longer certifies.
StaticFlow phi_project(const FlowOverTime& f, const RepeatedInterval& iv,
                       const Network& base);

struct BandView {
  const TimeExpandedNetwork* ten = nullptr;
  int lo = 0;
  int hi = 0;
  std::vector<ArcId> arcs;        // ten arcs between the layers plus super arcs in range
  std::vector<char> arc_mask;     // indexed by ten arc id
};

BandView band(const TimeExpandedNetwork& ten, int lo, int hi);

// Mask over a TEN residual graph's arcs: those whose underlying TEN arc is
// inside band [lo, hi].
std::vector<char> band_residual_mask(const TimeExpandedNetwork& ten, const ResidualGraph& rv,
                                     int lo, int hi);

}  // namespace fot
