#include "fot/oracle.hpp"

#include <algorithm>
#include <queue>

#include "fot/static_mcf.hpp"

namespace fot {

namespace {

struct SspState {
  const Network* net = nullptr;
  StaticFlow x;
  std::vector<Cost> potential;
  std::vector<Cap> excess;
  std::vector<std::vector<ArcId>> out;
  std::vector<std::vector<ArcId>> in;
};

Cap residual_fwd(const SspState& s, ArcId a) {
  const Arc& arc = s.net->arc(a);
  return is_infinite(arc.capacity) ? kInfCap : arc.capacity - s.x[a];
}

// One Dijkstra pass over reduced costs from `from`, then a push to the
// nearest deficit node. Potentials are raised by min(dist, dist_target) so
// every residual arc keeps a nonnegative reduced cost.
bool ssp_round(SspState& s, NodeId from) {
  const int n = s.net->node_count;
  std::vector<Cost> dist(static_cast<size_t>(n), kInfCap);
  std::vector<std::pair<ArcId, bool>> parent(static_cast<size_t>(n), {-1, false});
  std::vector<char> done(static_cast<size_t>(n), 0);
  using Item = std::pair<Cost, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  dist[static_cast<size_t>(from)] = 0;
  heap.push({0, from});
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (done[static_cast<size_t>(v)]) continue;
    done[static_cast<size_t>(v)] = 1;
    for (ArcId a : s.out[static_cast<size_t>(v)]) {
      if (residual_fwd(s, a) <= 0) continue;
      const Arc& arc = s.net->arc(a);
      Cost reduced = arc.cost + s.potential[static_cast<size_t>(v)] -
                     s.potential[static_cast<size_t>(arc.head)];
      require(reduced >= 0, ErrorKind::InternalInvariant, "negative reduced cost");
      Cost cand = d + reduced;
      if (cand < dist[static_cast<size_t>(arc.head)]) {
        dist[static_cast<size_t>(arc.head)] = cand;
        parent[static_cast<size_t>(arc.head)] = {a, false};
        heap.push({cand, arc.head});
      }
    }
    for (ArcId a : s.in[static_cast<size_t>(v)]) {
      if (s.x[a] <= 0) continue;
      const Arc& arc = s.net->arc(a);
      Cost reduced = -arc.cost + s.potential[static_cast<size_t>(v)] -
                     s.potential[static_cast<size_t>(arc.tail)];
      require(reduced >= 0, ErrorKind::InternalInvariant, "negative reduced cost");
      Cost cand = d + reduced;
      if (cand < dist[static_cast<size_t>(arc.tail)]) {
        dist[static_cast<size_t>(arc.tail)] = cand;
        parent[static_cast<size_t>(arc.tail)] = {a, true};
        heap.push({cand, arc.tail});
      }
    }
  }

  NodeId target = -1;
  for (NodeId v = 0; v < n; ++v) {
    if (s.excess[static_cast<size_t>(v)] >= 0 || dist[static_cast<size_t>(v)] == kInfCap)
      continue;
    if (target < 0 || dist[static_cast<size_t>(v)] < dist[static_cast<size_t>(target)])
      target = v;
  }
  if (target < 0) return false;

  Cap push = std::min(s.excess[static_cast<size_t>(from)],
                      -s.excess[static_cast<size_t>(target)]);
  for (NodeId v = target; v != from;) {
    auto [a, backward] = parent[static_cast<size_t>(v)];
    Cap spare = backward ? s.x[a] : residual_fwd(s, a);
    push = std::min(push, spare);
    v = backward ? s.net->arc(a).head : s.net->arc(a).tail;
  }
  require(push > 0, ErrorKind::InternalInvariant, "zero-width shortest path");
  for (NodeId v = target; v != from;) {
    auto [a, backward] = parent[static_cast<size_t>(v)];
    if (backward) {
      s.x[a] -= push;
      v = s.net->arc(a).head;
    } else {
      s.x[a] += push;
      v = s.net->arc(a).tail;
    }
  }
  s.excess[static_cast<size_t>(from)] -= push;
  s.excess[static_cast<size_t>(target)] += push;

  Cost cap_dist = dist[static_cast<size_t>(target)];
  for (NodeId v = 0; v < n; ++v) {
    Cost d = dist[static_cast<size_t>(v)] == kInfCap ? cap_dist
                                                     : std::min(dist[static_cast<size_t>(v)],
                                                                cap_dist);
    s.potential[static_cast<size_t>(v)] = checked_add(s.potential[static_cast<size_t>(v)], d);
  }
  return true;
}

}  // namespace

OracleResult oracle_mcmf_ten(const TimeExpandedNetwork& ten, std::int64_t arc_cap) {
  const Network& net = ten.net;
  require(net.arc_count() <= arc_cap, ErrorKind::Resource,
          "time expansion exceeds the configured size cap");

  // Independent max-flow pass fixes the value the oracle must route.
  Cap target_value = max_flow(net).value;

  SspState s;
  s.net = &net;
  s.x = zero_flow(net);
  s.potential.assign(static_cast<size_t>(net.node_count), 0);
  s.excess.assign(static_cast<size_t>(net.node_count), 0);
  s.out = net.out_arcs();
  s.in = net.in_arcs();

  // Saturate negative arcs; afterwards no residual arc has negative cost and
  // zero potentials are exact.
  for (ArcId a = 0; a < net.arc_count(); ++a) {
    const Arc& arc = net.arc(a);
    if (arc.cost >= 0) continue;
    require(!is_infinite(arc.capacity), ErrorKind::Unbounded,
            "negative-cost arc of infinite capacity");
    s.x[a] = arc.capacity;
    s.excess[static_cast<size_t>(arc.head)] += arc.capacity;
    s.excess[static_cast<size_t>(arc.tail)] -= arc.capacity;
  }
  s.excess[static_cast<size_t>(net.source)] += target_value;
  s.excess[static_cast<size_t>(net.sink)] -= target_value;

  for (NodeId v = 0; v < net.node_count; ++v) {
    while (s.excess[static_cast<size_t>(v)] > 0) {
      require(ssp_round(s, v), ErrorKind::InternalInvariant,
              "no route for remaining supply; the instance cannot be feasible");
    }
  }

  OracleResult out;
  out.flow = s.x;
  out.flow.value = flow_value(net, s.x);
  out.value = out.flow.value;
  out.cost = flow_cost(net, s.x);
  require(out.value == target_value, ErrorKind::InternalInvariant,
          "oracle value differs from the max-flow pass");
  check_feasible(net, s.x);

  // Optimality certificate: a label-correcting scan of the residual network
  // finds no negative cycle.
  ResidualGraph rv = residual(net, s.x);
  require(!find_negative_cycle(rv, residual_cost_weights(rv)).has_value(),
          ErrorKind::InternalInvariant, "oracle residual contains a negative cycle");
  return out;
}

VerificationReport verify(const NormalizedNetwork& norm, const TimeExpandedNetwork& ten,
                          const StaticFlow& flow, std::int64_t arc_cap) {
  VerificationReport rep;
  HorizonBounds bounds = horizon_bounds(norm.base);
  rep.theta_threshold = bounds.threshold;
  rep.threshold_met = static_cast<Cost>(ten.horizon) > bounds.threshold;
  Cost t1 = bounds.step1_exit_margin;
  rep.predicted_min_span = static_cast<Cost>(ten.horizon) -
                           checked_mul(2, checked_add(t1, bounds.growth_bound(t1)));

  try {
    check_feasible(ten.net, flow);
    rep.feasibility_ok = true;
  } catch (const Error&) {
    rep.feasibility_ok = false;
  }
  rep.solution_value = flow_value(ten.net, flow);
  rep.solution_cost = flow_cost(ten.net, flow);

  if (rep.feasibility_ok) {
    ResidualGraph rv = residual(ten.net, flow);
    rep.optimality_scan_ok =
        !find_negative_cycle(rv, residual_cost_weights(rv)).has_value() &&
        is_maximum(ten.net, flow);
  }

  if (ten.net.arc_count() <= arc_cap) {
    OracleResult oracle = oracle_mcmf_ten(ten, arc_cap);
    rep.oracle_value = oracle.value;
    rep.oracle_cost = oracle.cost;
    rep.value_ok = rep.solution_value == oracle.value;
    rep.cost_ok = rep.solution_cost == oracle.cost;
  } else {
    rep.cost_checked = false;
    rep.value_ok = rep.optimality_scan_ok;  // maximality stands in for the value check
  }

  FlowOverTime f{&ten, flow};
  auto ivs = check_repeated(f);
  rep.has_interval = !ivs.empty();
  if (rep.has_interval) {
    rep.repeated = ivs.front();
    for (const auto& iv : ivs)
      if (iv.span() > rep.repeated.span()) rep.repeated = iv;
  }
  if (rep.threshold_met) {
    rep.interval_bound_ok =
        rep.has_interval && rep.repeated.span() >= rep.predicted_min_span;
  }
  return rep;
}

std::vector<AuditCheck> audit_log(const IterationLog& log, const HorizonBounds& bounds) {
  std::vector<AuditCheck> out;
  if (log.entries.empty()) return out;

  auto add = [&](const std::string& name, bool pass, const std::string& detail) {
    out.push_back({name, pass, detail});
  };

  bool decreasing = true;
  std::string where;
  for (const auto& e : log.entries) {
    bool must_decrease = e.phase == LogEntry::Phase::Step11 ||
                         e.phase == LogEntry::Phase::Step12 ||
                         e.phase == LogEntry::Phase::Step2 ||
                         e.phase == LogEntry::Phase::Fallback;
    if (must_decrease && !(e.cost_after < e.cost_before)) {
      decreasing = false;
      where = "entry " + std::to_string(e.iteration);
    }
  }
  add("strictly-decreasing-cost", decreasing, where);

  bool value_const = true;
  Cap value = log.entries.front().value;
  for (const auto& e : log.entries)
    if (e.value != value) value_const = false;
  add("constant-flow-value", value_const, "");

  Cost step1 = log.step1_iterations();
  Cost limit = checked_mul(2, bounds.sum_cost_capacity);
  add("step1-iteration-bound", step1 <= limit,
      std::to_string(step1) + " <= " + std::to_string(limit));

  bool cut_clean = true;
  for (const auto& e : log.entries)
    if ((e.phase == LogEntry::Phase::Step11 || e.phase == LogEntry::Phase::Step12) &&
        e.touches_cut)
      cut_clean = false;
  add("step1-avoids-cut-arcs", cut_clean, "");

  bool counts_ok = true;
  bool heights_ok = true;
  bool stack_ok = true;
  for (const auto& e : log.entries) {
    if (e.phase != LogEntry::Phase::Step2) continue;
    std::int64_t cap = e.three_area ? 2 * bounds.node_count + 1 : bounds.node_count + 1;
    if (e.component_count > cap) counts_ok = false;
    if (e.height_bound > 0 && e.max_component_height > e.height_bound) heights_ok = false;
    for (Cost c : e.h_cycle_costs)
      if (c >= 0) stack_ok = false;
  }
  add("component-count-bound", counts_ok, "");
  add("component-height-bound", heights_ok, "");
  add("stack-cycles-strictly-negative", stack_ok, "");
  return out;
}

bool all_pass(const std::vector<AuditCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(),
                     [](const AuditCheck& c) { return c.pass; });
}

}  // namespace fot
