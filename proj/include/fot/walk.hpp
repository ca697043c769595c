#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "fot/residual.hpp"

namespace fot {

// Maps an arc id to its (tail, head); lets walk utilities run over base
// networks, residual graphs and time-expanded networks alike.
using ArcEnds = std::function<std::pair<NodeId, NodeId>(int)>;

ArcEnds arc_ends(const Network& net);
ArcEnds arc_ends(const ResidualGraph& rv);

// Alternating node/arc sequence (v1, a1, v2, ..., a_{k-1}, v_k).
struct Walk {
  std::vector<NodeId> nodes;
  std::vector<int> arcs;

  bool closed() const { return !nodes.empty() && nodes.front() == nodes.back(); }
  bool simple() const;  // all nodes distinct except possibly the endpoints
  bool is_cycle() const { return closed() && simple() && !arcs.empty(); }
  int length() const { return static_cast<int>(arcs.size()); }
};

Walk walk_from_arcs(const std::vector<int>& arcs, const ArcEnds& ends);

// Throws MalformedWalk unless consecutive incidences hold.
void validate_walk(const Walk& w, const ArcEnds& ends);

struct WalkDecomposition {
  Walk path;                // empty for closed input
  std::vector<Walk> cycles;
};

// Splits a walk into a v1-vk path plus cycles. Cycles are closed at the
// first node revisit; ties break by arc insertion order.
WalkDecomposition decompose_walk(const Walk& w, const ArcEnds& ends);

// Decomposes an Eulerian multiset of arcs into arc-disjoint cycles.
// Deterministic: always continues from the lowest-indexed node with
// remaining out-arcs, taking the lowest-indexed unused arc. Throws
// NotEulerian when in- and out-multiplicities differ at some node.
std::vector<std::vector<int>> decompose_eulerian(const IncidenceVector& h, int node_count,
                                                 const ArcEnds& ends);

}  // namespace fot
