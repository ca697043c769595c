#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "fot/error.hpp"

namespace fot {

using NodeId = int;
using ArcId = int;
using Cap = std::int64_t;
using Cost = std::int64_t;
using Transit = std::int64_t;

// Sentinel for super-source/sink arcs; never do arithmetic on it directly.
inline constexpr Cap kInfCap = std::numeric_limits<Cap>::max();

inline bool is_infinite(Cap u) { return u == kInfCap; }

struct Arc {
  NodeId tail = -1;
  NodeId head = -1;
  Cap capacity = 0;
  Transit transit = 0;
  Cost cost = 0;
};

// Directed multigraph with capacities, transit times and costs. Doubles as
// the static representation of a time-expanded network. Immutable once
// validated; parallel arcs and self-loops are allowed.
struct Network {
  int node_count = 0;
  std::vector<Arc> arcs;
  NodeId source = -1;
  NodeId sink = -1;
  std::vector<std::string> node_names;  // optional, for diagnostics

  int arc_count() const { return static_cast<int>(arcs.size()); }
  const Arc& arc(ArcId a) const { return arcs[static_cast<size_t>(a)]; }

  void validate() const;

  Transit total_transit() const;            // sum of tau(a)
  Cost total_cost_capacity() const;         // sum of |c(a)| * u(a), infinite caps excluded
  std::vector<std::vector<ArcId>> out_arcs() const;
  std::vector<std::vector<ArcId>> in_arcs() const;
};

// Integral static flow on a network's arcs.
struct StaticFlow {
  std::vector<Cap> on_arc;
  Cap value = 0;

  Cap operator[](ArcId a) const { return on_arc[static_cast<size_t>(a)]; }
  Cap& operator[](ArcId a) { return on_arc[static_cast<size_t>(a)]; }
};

StaticFlow zero_flow(const Network& net);

// Throws InfeasibleFlow unless 0 <= x <= u everywhere and flow is conserved
// at every node other than source/sink.
void check_feasible(const Network& net, const StaticFlow& x);

Cost flow_cost(const Network& net, const StaticFlow& x);
Cap flow_value(const Network& net, const StaticFlow& x);

// tau(a) in {0,1} everywhere; arcs with larger transit are chains of unit
// arcs through fresh nodes. The first chain arc carries the original cost.
struct NormalizedNetwork {
  Network base;
  int original_node_count = 0;
  std::vector<std::vector<ArcId>> subdivision;  // original arc -> chain of unit arcs
  std::vector<ArcId> origin_arc;                // normalized arc -> original arc

  bool is_identity() const;
};

NormalizedNetwork normalize_transit_times(const Network& net);

// Project a feasible flow on the normalized network back to original arcs
// (every chain carries one value by conservation at the fresh nodes).
StaticFlow project_to_original(const NormalizedNetwork& norm, const StaticFlow& x,
                               int original_arc_count);

}  // namespace fot
