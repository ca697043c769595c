#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fot/projection.hpp"
#include "fot/static_mcf.hpp"
#include "fot/time_expansion.hpp"

namespace fot {

// Horizon-threshold arithmetic for the repeated-structure guarantee. All
// quantities refer to the normalized network.
struct HorizonBounds {
  Transit sum_transit = 0;        // sum of tau(a)
  Cost sum_cost_capacity = 0;     // sum of |c(a)| * u(a)
  std::int64_t node_count = 0;    // |V| after normalization
  Cost comb_height = 0;           // 2 * sum_tau * (1 + sum_cu)
  Cost step1_exit_margin = 0;     // 6 * sum_cu * sum_tau
  Cost threshold = 0;             // horizons above this guarantee a repeated optimum
  Cost min_repeated_span = 0;     // sum_tau * (2 * sum_cu + 3)

  Cost growth_bound(Cost x) const;  // J(x)
};

HorizonBounds horizon_bounds(const Network& normalized_base);

struct SolveOptions {
  enum class Step2Strategy { Exact, Heuristic };
  Step2Strategy step2_strategy = Step2Strategy::Exact;
  int max_exact_nodes = 12;  // exact cycle search only below this many base nodes
  int verbosity = 0;
};

struct LogEntry {
  enum class Phase { Seed, Step11, Step12, Step2, Flush, Fallback };
  Phase phase = Phase::Seed;
  int iteration = 0;
  Cost cost_before = 0;
  Cost cost_after = 0;
  Cap value = 0;
  int interval_before_lo = 0, interval_before_hi = 0;  // 0,0 when absent
  int interval_after_lo = 0, interval_after_hi = 0;

  // Step 1 bookkeeping.
  Cost cycle_cost = 0;
  Transit cycle_transit = 0;
  Transit cycle_height = 0;
  int family_size = 0;
  std::int64_t winding = 0;
  bool touches_cut = false;

  // Step 2 bookkeeping.
  int component_count = 0;
  bool three_area = false;
  Transit max_component_height = 0;
  Cost height_bound = 0;   // J(h_i) at the time of the iteration
  std::int64_t h_i = 0;
  bool compressed = false;
  std::vector<Cost> h_cycle_costs;  // decomposition costs of the running Eulerian stack
  int flushed_zero_cycles = 0;

  std::string note;
};

struct IterationLog {
  std::vector<LogEntry> entries;

  int count(LogEntry::Phase phase) const;
  int step1_iterations() const;
};

struct SolveCertificates {
  bool feasible = false;
  bool maximal = false;
  bool residual_clean = false;
  bool construction_complete = false;
  int fallback_cancellations = 0;

  bool phase11_clean_exit = false;
  bool phase12_clean_exit = false;
  bool post11_no_zero_transit_negative = false;
  bool post12_band_clean = false;

  std::vector<RepeatedInterval> repeated;
  RepeatedInterval best_interval;
  bool has_interval = false;

  Cost theta_threshold = 0;
  bool threshold_met = false;
  Cost predicted_min_span = 0;
  bool interval_bound_holds = false;
};

struct SolveResult {
  std::unique_ptr<TimeExpandedNetwork> ten;
  StaticFlow flow;
  Cap value = 0;
  Cost cost = 0;
  HorizonBounds bounds;
  SolveCertificates certificates;
  IterationLog log;

  FlowOverTime flow_over_time() const { return {ten.get(), flow}; }
};

// Maximum flow over time via the temporally repeated schedule of a
// minimum-transit static flow. Requires horizon > sum_tau for the projection
// guarantees; smaller horizons still yield a maximum flow over time.
struct SeedResult {
  StaticFlow ten_flow;
  Cap value = 0;
  StaticFlow static_flow;  // on the normalized base network
};

SeedResult ford_fulkerson_seed(const NormalizedNetwork& norm, const TimeExpandedNetwork& ten);

// Appendix-style compression: rewrites positive-transit repeated components
// that are anchored at a super node into bounded-height liftings of no
// greater cost. Returns the input cycle when nothing qualifies or a rewrite
// cannot be realized in the residual network.
Walk compress_cycle(const TimeExpandedNetwork& ten, const ResidualGraph& ten_rv,
                    const ResidualGraph& base_rv, const Walk& cycle,
                    const RepeatedInterval& iv, std::string* note = nullptr);

SolveResult solve(const NormalizedNetwork& norm, int horizon, const SolveOptions& opts = {});

// Exact minimum-weight simple-cycle search (branch and bound) over the
// residual arcs enabled by `mask`. Returns the best strictly negative cycle.
std::optional<std::vector<int>> exact_min_negative_cycle(const ResidualGraph& rv,
                                                         const std::vector<Cost>& weights,
                                                         const std::vector<char>& mask,
                                                         std::int64_t node_budget = 2000000);

}  // namespace fot
