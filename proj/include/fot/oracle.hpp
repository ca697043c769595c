#pragma once

#include <string>
#include <vector>

#include "fot/construction.hpp"
#include "fot/time_expansion.hpp"

namespace fot {

struct OracleResult {
  StaticFlow flow;
  Cap value = 0;
  Cost cost = 0;
};

// Minimum-cost maximum flow on the materialized time-expanded network via
// successive shortest paths: negative arcs are pre-saturated, the resulting
// imbalances plus the max-flow supply are routed with Dijkstra over reduced
// costs. Shares no cancel loops with the construction. Throws Resource when
// the expansion exceeds `arc_cap` arcs.
OracleResult oracle_mcmf_ten(const TimeExpandedNetwork& ten, std::int64_t arc_cap = 5000000);

struct VerificationReport {
  bool feasibility_ok = false;
  bool value_ok = false;
  bool cost_ok = false;
  bool optimality_scan_ok = false;
  bool cost_checked = true;  // false when the size cap degrades checking

  Cap oracle_value = 0;
  Cap solution_value = 0;
  Cost oracle_cost = 0;
  Cost solution_cost = 0;

  bool has_interval = false;
  RepeatedInterval repeated;

  Cost theta_threshold = 0;
  bool threshold_met = false;
  Cost predicted_min_span = 0;
  bool interval_bound_ok = true;

  bool all_ok() const {
    return feasibility_ok && value_ok && (cost_ok || !cost_checked) && optimality_scan_ok &&
           interval_bound_ok;
  }
};

VerificationReport verify(const NormalizedNetwork& norm, const TimeExpandedNetwork& ten,
                          const StaticFlow& flow, std::int64_t arc_cap = 5000000);

struct AuditCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Re-checks the per-iteration claims recorded in a solve log: strict cost
// decrease, constant value, step-1 iteration bound, cut avoidance, repeated
// component counts, component height bounds and the strict negativity of the
// step-2 bookkeeping cycles.
std::vector<AuditCheck> audit_log(const IterationLog& log, const HorizonBounds& bounds);

bool all_pass(const std::vector<AuditCheck>& checks);

}  // namespace fot
