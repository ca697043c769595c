#pragma once

#include <optional>
#include <vector>

#include "fot/walk.hpp"

namespace fot {

// Edmonds-Karp. Handles infinite capacities on super arcs.
StaticFlow max_flow(const Network& net);

// Augments a feasible flow along shortest residual paths until maximum.
StaticFlow complete_to_max(const Network& net, StaticFlow x);

// True iff the residual network contains no source->sink path.
bool is_maximum(const Network& net, const StaticFlow& x);

// Bellman-Ford label correcting with parent-pointer extraction; arcs are
// scanned in index order, so results are deterministic. Weights are indexed
// by residual arc id. Returns residual arc ids in traversal order.
std::optional<std::vector<int>> find_negative_cycle(const ResidualGraph& rv,
                                                    const std::vector<Cost>& weights);

// Restricted variant: only residual arcs with allowed_arc[r] != 0 (and, when
// given, both endpoints allowed) participate.
std::optional<std::vector<int>> find_negative_cycle(const ResidualGraph& rv,
                                                    const std::vector<Cost>& weights,
                                                    const std::vector<char>* allowed_node,
                                                    const std::vector<char>* allowed_arc);

std::vector<Cost> residual_cost_weights(const ResidualGraph& rv);
std::vector<Cost> residual_transit_weights(const ResidualGraph& rv);

// Cancels negative-weight residual cycles starting from the zero flow until
// none remains. Throws Unbounded when a negative cycle has infinite
// capacity. The result is certified: no negative-weight residual cycle.
StaticFlow min_cost_circulation(const Network& net, const std::vector<Cost>& weights);

struct FlowDecomposition {
  struct Piece {
    Walk walk;  // over network arc ids
    Cap rate = 0;
  };
  std::vector<Piece> paths;   // source -> sink
  std::vector<Piece> cycles;
};

FlowDecomposition decompose_flow(const Network& net, const StaticFlow& x);

struct ReachabilityPartition {
  std::vector<char> from_source;  // V_x(s): reachable from s in the residual
  std::vector<char> to_sink;      // V_x(t): reaches t in the residual
  std::vector<char> between;      // the rest

  bool in_source_part(NodeId v) const { return from_source[static_cast<size_t>(v)] != 0; }
  bool in_sink_part(NodeId v) const { return to_sink[static_cast<size_t>(v)] != 0; }
};

// Requires x maximum (throws NotMaximum otherwise): only then are the
// source- and sink-side parts disjoint.
ReachabilityPartition reachability_partition(const Network& net, const StaticFlow& x);

struct CutArcSet {
  std::vector<ArcId> arcs;            // members of at least one minimum s-t cut
  std::vector<char> mask;             // indexed by arc id
};

// An arc lies in some minimum cut iff it is saturated by a maximum flow and
// its tail cannot reach its head in that flow's residual network.
CutArcSet cut_arcs(const Network& net);

struct EulerianSearchResult {
  IncidenceVector subgraph;  // multiplicities over rv's arcs
  Cost cost = 0;
  Transit transit = 0;
};

// Minimum (cost, transit)-lexicographic Eulerian subgraph among those whose
// cycles are all s- or t-reachable in the residual of a maximum flow.
// Search runs inside the source- and sink-side strongly connected parts, so
// every cycle of the result is reachable by construction (and re-verified).
// Empty result means no s-/t-reachable negative-cost cycle exists.
std::optional<EulerianSearchResult> lex_min_eulerian_subgraph(const ResidualGraph& rv,
                                                              const ReachabilityPartition& part);

// Nodes strongly connected with v in the residual graph (v's SCC).
std::vector<char> strongly_connected_with(const ResidualGraph& rv, NodeId v);

std::vector<char> reachable_from(const ResidualGraph& rv, NodeId v);
std::vector<char> reaches(const ResidualGraph& rv, NodeId v);

}  // namespace fot
