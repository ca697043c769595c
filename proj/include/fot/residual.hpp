#pragma once

#include <vector>

#include "fot/network.hpp"

namespace fot {

// One residual arc: a base arc traversed forward (spare capacity) or
// backward (undoing flow). Costs and transits are negated on backward arcs.
struct ResidualArc {
  ArcId base = -1;
  bool backward = false;
  NodeId tail = -1;
  NodeId head = -1;
  Cap capacity = 0;
  Cost cost = 0;
  Transit transit = 0;
};

// Materialized residual network of (net, x). Only arcs with strictly
// positive residual capacity are present. Arc order is deterministic:
// forward arc of base 0, backward of base 0, forward of base 1, ...
struct ResidualGraph {
  const Network* net = nullptr;
  int node_count = 0;
  std::vector<ResidualArc> arcs;

  int arc_count() const { return static_cast<int>(arcs.size()); }
  const ResidualArc& arc(int r) const { return arcs[static_cast<size_t>(r)]; }
  std::vector<std::vector<int>> out_arcs() const;

  // Index of the residual arc for (base, backward), or -1 if absent.
  int find(ArcId base, bool backward) const;
};

ResidualGraph residual(const Network& net, const StaticFlow& x);

// Multiplicity vector over the arcs of a residual graph (or any arc-indexed
// collection). chi of a cycle is 0/1; Eulerian multisets may exceed 1.
struct IncidenceVector {
  std::vector<Cap> mult;

  Cap operator[](int a) const { return mult[static_cast<size_t>(a)]; }
  Cap& operator[](int a) { return mult[static_cast<size_t>(a)]; }
  bool empty() const;
};

IncidenceVector zero_incidence(int arc_count);

// Apply `amount` units along every residual arc in `target` (counted with
// multiplicity) to the flow. Throws CapacityExceeded when any arc lacks
// residual capacity for mult * amount.
StaticFlow augment(const Network& net, const StaticFlow& x, const ResidualGraph& rv,
                   const IncidenceVector& target, Cap amount);

// Same, along a list of residual arc ids forming a cycle; amount may be the
// cycle's full residual capacity when `use_full_capacity` is set.
StaticFlow augment_cycle(const Network& net, const StaticFlow& x, const ResidualGraph& rv,
                         const std::vector<int>& cycle_arcs, Cap amount);

Cap cycle_capacity(const ResidualGraph& rv, const std::vector<int>& cycle_arcs);
Cost cycle_cost(const ResidualGraph& rv, const std::vector<int>& cycle_arcs);
Transit cycle_transit(const ResidualGraph& rv, const std::vector<int>& cycle_arcs);

// Unit-capacity expansion: capacity-k residual arcs become k parallel unit
// arcs. Infinite-capacity arcs require `infinite_bound` copies (> 0), else
// UnboundedExpansion is raised.
struct UnitExpansion {
  const ResidualGraph* residual = nullptr;
  std::vector<int> origin;  // expanded arc -> residual arc id

  int arc_count() const { return static_cast<int>(origin.size()); }
};

UnitExpansion unit_capacity_expansion(const ResidualGraph& rv, Cap infinite_bound = 0);

}  // namespace fot
