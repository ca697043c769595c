#pragma once

#include <vector>

#include "fot/static_mcf.hpp"
#include "fot/time_expansion.hpp"
#include "fot/walk.hpp"

namespace fot {

// Height bookkeeping for a walk: cumulative transits on the base side,
// layer indices (super nodes ignored) on the time-expanded side.
struct HeightProfile {
  std::vector<Transit> at_node;  // per walk position; empty entries skipped on TEN side
  Transit low = 0;               // h-
  Transit high = 0;              // h+
  Transit span = 0;              // h = h+ - h-
  int low_index = 0;             // first argmin position
  int high_index = 0;            // first argmax position
};

HeightProfile base_heights(const ResidualGraph& rv, const Walk& w);
HeightProfile ten_heights(const TimeExpandedNetwork& ten, const Walk& w);

// Projection pi: strips layers, maps the super source/sink to s/t and drops
// super arcs (merging the duplicated endpoint). Result arcs live in base_rv.
// When `inside` is given, every real node of w must lie in its layers.
Walk project_walk(const TimeExpandedNetwork& ten, const ResidualGraph& ten_rv,
                  const ResidualGraph& base_rv, const Walk& w,
                  const RepeatedInterval* inside);

// Lifting to layer `layer`: pins the walk's lowest point at that layer.
// Requires layer in [iv.theta1, iv.theta2 - h(w)]; throws BandOverflow else.
Walk lift_walk(const ResidualGraph& base_rv, const ResidualGraph& ten_rv,
               const TimeExpandedNetwork& ten, const Walk& w, int layer,
               const RepeatedInterval& iv);

// Lowest layer visited by a TEN walk (super nodes ignored).
int lowest_layer(const TimeExpandedNetwork& ten, const Walk& w);

struct RepeatedComponent {
  Walk walk;  // sub-walk of the cycle, TEN residual arcs
  enum class Endpoint { LayerLow, LayerHigh, WalkEnd };
  Endpoint starts = Endpoint::WalkEnd;
  Endpoint ends = Endpoint::WalkEnd;
};

// Splits a TEN cycle at super-node visits and at every intersection with
// layer theta1 or theta2, keeping the pieces that lie inside the band.
std::vector<RepeatedComponent> repeated_components(const TimeExpandedNetwork& ten,
                                                   const ResidualGraph& ten_rv, const Walk& cycle,
                                                   const RepeatedInterval& iv);

// Zero-transit negative cycle B lifted to every admissible layer
// theta1..theta2-h(B). The lifts are pairwise node-disjoint.
std::vector<Walk> lift_zero_cycle_family(const ResidualGraph& base_rv,
                                         const ResidualGraph& ten_rv,
                                         const TimeExpandedNetwork& ten, const Walk& cycle,
                                         const RepeatedInterval& iv);

// floor((theta2 - theta_start - tau_p1 - hplus_p2) / cycle_height) - 1
std::int64_t winding_count(int theta2, int theta_start, Transit tau_p1, Transit hplus_p2,
                           Transit cycle_height);

struct ReachableFamily {
  std::vector<Walk> cycles;  // TEN residual cycles, closed through a super node
  Walk closed_walk;          // the base walk P1 + B^r + P2
  std::int64_t winding = 0;  // times the cycle is traversed
  int copies = 0;            // shifted lifts
};

// Lifting-lemma family for a reachable negative cycle with nonzero transit:
// wind the cycle between its connectors, lift |tau(B)| shifted copies and
// close each through the super source (source side) or super sink.
// `min_winding` is the smallest acceptable winding count; when the interval
// cannot support it, IntervalTooSmall is thrown. ConnectorsMissing signals
// an unusable super-arc closure.
ReachableFamily lift_reachable_cycle_family(const ResidualGraph& base_rv,
                                            const ResidualGraph& ten_rv,
                                            const TimeExpandedNetwork& ten, const Walk& cycle,
                                            const Walk& into_cycle, const Walk& out_of_cycle,
                                            const RepeatedInterval& iv, bool source_side,
                                            std::int64_t min_winding);

}  // namespace fot
