#include "fot/construction.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace fot {

Cost HorizonBounds::growth_bound(Cost x) const {
  // J(x) = sum_tau * ((|V|+1)(2 sum_tau + 3) + 1 + 2h + 2x) * sum_cu + 3 sum_tau
  Cost inner = checked_mul(static_cast<Cost>(node_count) + 1,
                           checked_add(checked_mul(2, sum_transit), 3));
  inner = checked_add(inner, 1);
  inner = checked_add(inner, checked_mul(2, comb_height));
  inner = checked_add(inner, checked_mul(2, x));
  Cost j = checked_mul(checked_mul(sum_transit, inner), sum_cost_capacity);
  return checked_add(j, checked_mul(3, sum_transit));
}

HorizonBounds horizon_bounds(const Network& normalized_base) {
  HorizonBounds b;
  b.sum_transit = normalized_base.total_transit();
  b.sum_cost_capacity = normalized_base.total_cost_capacity();
  b.node_count = normalized_base.node_count;
  b.comb_height = checked_mul(checked_mul(2, b.sum_transit), checked_add(1, b.sum_cost_capacity));
  b.step1_exit_margin = checked_mul(checked_mul(6, b.sum_cost_capacity), b.sum_transit);
  b.min_repeated_span =
      checked_mul(b.sum_transit, checked_add(checked_mul(2, b.sum_cost_capacity), 3));
  Cost t1 = b.step1_exit_margin;
  Cost j1 = b.growth_bound(t1);
  Cost j2 = b.growth_bound(checked_add(t1, j1));
  b.threshold = checked_mul(2, checked_add(t1, checked_add(j1, j2)));
  return b;
}

int IterationLog::count(LogEntry::Phase phase) const {
  int n = 0;
  for (const auto& e : entries)
    if (e.phase == phase) ++n;
  return n;
}

int IterationLog::step1_iterations() const {
  return count(LogEntry::Phase::Step11) + count(LogEntry::Phase::Step12);
}

SeedResult ford_fulkerson_seed(const NormalizedNetwork& norm, const TimeExpandedNetwork& ten) {
  const Network& base = norm.base;
  const int horizon = ten.horizon;

  // Minimum-transit static flow: a min-cost circulation in the network with
  // a sink-to-source return arc of weight -horizon.
  Network augmented = base;
  Cap total_u = 0;
  for (const Arc& a : base.arcs) {
    require(!is_infinite(a.capacity), ErrorKind::UnboundedExpansion,
            "seed requires finite base capacities");
    total_u = checked_add(total_u, a.capacity);
  }
  augmented.arcs.push_back({base.sink, base.source, total_u, 0, 0});
  std::vector<Cost> weights;
  weights.reserve(augmented.arcs.size());
  for (const Arc& a : base.arcs) weights.push_back(a.transit);
  weights.push_back(-static_cast<Cost>(horizon));
  StaticFlow circ = min_cost_circulation(augmented, weights);

  StaticFlow x = zero_flow(base);
  for (ArcId a = 0; a < base.arc_count(); ++a) x[a] = circ[a];
  x.value = circ[base.arc_count()];
  check_feasible(base, x);

  FlowDecomposition dec = decompose_flow(base, x);
  for (const auto& piece : dec.cycles) {
    Transit t = 0;
    for (ArcId a : piece.walk.arcs) t += base.arc(a).transit;
    require(t == 0, ErrorKind::InternalInvariant,
            "min-transit circulation left a nonzero-transit support cycle");
  }

  // Keep only the path part; pump each path at its rate over all admissible
  // injection times.
  SeedResult seed;
  seed.static_flow = zero_flow(base);
  for (const auto& piece : dec.paths)
    for (ArcId a : piece.walk.arcs) seed.static_flow[a] += piece.rate;
  seed.static_flow.value = flow_value(base, seed.static_flow);

  std::vector<ArcId> source_arc(static_cast<size_t>(horizon) + 1, -1);
  std::vector<ArcId> sink_arc(static_cast<size_t>(horizon) + 1, -1);
  for (ArcId a = 0; a < ten.net.arc_count(); ++a) {
    const auto& inf = ten.info[static_cast<size_t>(a)];
    if (inf.kind == TimeExpandedNetwork::ArcKind::FromSuperSource)
      source_arc[static_cast<size_t>(inf.layer)] = a;
    if (inf.kind == TimeExpandedNetwork::ArcKind::ToSuperSink)
      sink_arc[static_cast<size_t>(inf.layer)] = a;
  }

  seed.ten_flow = zero_flow(ten.net);
  for (const auto& piece : dec.paths) {
    Transit path_transit = 0;
    Transit max_prefix = 0;
    Transit prefix_scan = 0;
    for (ArcId a : piece.walk.arcs) {
      max_prefix = std::max(max_prefix, prefix_scan);
      prefix_scan += base.arc(a).transit;
      path_transit += base.arc(a).transit;
    }
    // Every arc's copy must exist: inject + prefix <= horizon - 1.
    int last = std::min<int>(horizon - static_cast<int>(path_transit),
                             horizon - 1 - static_cast<int>(max_prefix));
    for (int inject = 1; inject <= last; ++inject) {
      Transit prefix = 0;
      for (ArcId a : piece.walk.arcs) {
        ArcId copy = ten.copy_arc(a, inject + static_cast<int>(prefix));
        require(copy >= 0, ErrorKind::InternalInvariant, "missing arc copy for injection");
        seed.ten_flow[copy] += piece.rate;
        prefix += base.arc(a).transit;
      }
      seed.ten_flow[source_arc[static_cast<size_t>(inject)]] += piece.rate;
      seed.ten_flow[sink_arc[static_cast<size_t>(inject + path_transit)]] += piece.rate;
      seed.value += piece.rate;
    }
  }
  check_feasible(ten.net, seed.ten_flow);
  // Zero-transit tail arcs clip the injection schedule below the expansion's
  // own maximum; shortest-path completion recovers the missing value near
  // the horizon ends without touching the repeated middle.
  seed.ten_flow = complete_to_max(ten.net, std::move(seed.ten_flow));
  seed.value = seed.ten_flow.value;
  return seed;
}

std::optional<std::vector<int>> exact_min_negative_cycle(const ResidualGraph& rv,
                                                         const std::vector<Cost>& weights,
                                                         const std::vector<char>& mask,
                                                         std::int64_t node_budget) {
  const int n = rv.node_count;
  std::vector<std::vector<int>> out(static_cast<size_t>(n));
  for (int r = 0; r < rv.arc_count(); ++r)
    if (mask[static_cast<size_t>(r)]) out[static_cast<size_t>(rv.arc(r).tail)].push_back(r);

  std::optional<std::vector<int>> best;
  Cost best_cost = 0;

  auto consider = [&](Cost cost, const std::vector<int>& arcs) {
    if (cost > best_cost || cost >= 0) return;
    if (cost == best_cost && best && !(arcs < *best)) return;
    best = arcs;
    best_cost = cost;
  };

  for (NodeId v0 = 0; v0 < n; ++v0) {
    // Once the subgraph on nodes >= v0 has no negative cycle, no later start
    // node can produce one either.
    std::vector<char> node_ok(static_cast<size_t>(n), 0);
    for (NodeId v = v0; v < n; ++v) node_ok[static_cast<size_t>(v)] = 1;
    if (!find_negative_cycle(rv, weights, &node_ok, &mask)) break;

    // Lower bound: cheapest walk (<= n arcs) to v0 within the subgraph.
    std::vector<Cost> lb(static_cast<size_t>(n), kInfCap);
    lb[static_cast<size_t>(v0)] = 0;
    for (int round = 0; round < n; ++round) {
      bool changed = false;
      for (int r = 0; r < rv.arc_count(); ++r) {
        if (!mask[static_cast<size_t>(r)]) continue;
        const ResidualArc& ra = rv.arc(r);
        if (ra.tail < v0 || ra.head < v0) continue;
        if (lb[static_cast<size_t>(ra.head)] == kInfCap) continue;
        Cost cand = lb[static_cast<size_t>(ra.head)] + weights[static_cast<size_t>(r)];
        if (cand < lb[static_cast<size_t>(ra.tail)]) {
          lb[static_cast<size_t>(ra.tail)] = cand;
          changed = true;
        }
      }
      if (!changed) break;
    }

    std::vector<char> visited(static_cast<size_t>(n), 0);
    std::vector<int> path;
    std::int64_t budget = node_budget;
    bool truncated = false;

    auto dfs = [&](auto&& self, NodeId at, Cost cost) -> void {
      if (truncated) return;
      if (--budget <= 0) {
        truncated = true;
        return;
      }
      for (int r : out[static_cast<size_t>(at)]) {
        const ResidualArc& ra = rv.arc(r);
        NodeId to = ra.head;
        Cost next = cost + weights[static_cast<size_t>(r)];
        if (to == v0) {
          path.push_back(r);
          consider(next, path);
          path.pop_back();
          continue;
        }
        if (to < v0 || visited[static_cast<size_t>(to)]) continue;
        if (lb[static_cast<size_t>(to)] == kInfCap) continue;
        Cost threshold = best ? best_cost : 0;
        if (next + lb[static_cast<size_t>(to)] > threshold) continue;
        visited[static_cast<size_t>(to)] = 1;
        path.push_back(r);
        self(self, to, next);
        path.pop_back();
        visited[static_cast<size_t>(to)] = 0;
      }
    };
    visited[static_cast<size_t>(v0)] = 1;
    dfs(dfs, v0, 0);
    if (truncated && best) break;  // keep the proven-negative best we have
  }
  return best;
}

namespace {

struct SignedArc {
  ArcId base = -1;       // arc id in the owning network
  bool backward = false;

  bool operator<(const SignedArc& o) const {
    return base < o.base || (base == o.base && backward < o.backward);
  }
  bool operator==(const SignedArc& o) const {
    return base == o.base && backward == o.backward;
  }
  SignedArc opposite() const { return {base, !backward}; }
};

std::vector<SignedArc> signed_arcs_of(const ResidualGraph& rv, const std::vector<int>& arcs) {
  std::vector<SignedArc> out;
  out.reserve(arcs.size());
  for (int r : arcs) out.push_back({rv.arc(r).base, rv.arc(r).backward});
  return out;
}

// Re-resolve a signed walk against a freshly built residual graph.
std::vector<int> refind_arcs(const ResidualGraph& rv, const std::vector<SignedArc>& arcs) {
  std::vector<int> out;
  out.reserve(arcs.size());
  for (const SignedArc& sa : arcs) {
    int r = rv.find(sa.base, sa.backward);
    require(r >= 0, ErrorKind::InternalInvariant, "signed arc vanished from the residual");
    out.push_back(r);
  }
  return out;
}

// Deterministic connector search: shortest by transit via label correcting
// limited to simple-path length, falling back to hop-count BFS when negative
// transit cycles contaminate the labels.
std::optional<Walk> connector_path(const ResidualGraph& rv, const std::vector<char>& allowed,
                                   NodeId from, NodeId to) {
  const int n = rv.node_count;
  if (from == to) {
    Walk w;
    w.nodes.push_back(from);
    return w;
  }
  std::vector<Cost> dist(static_cast<size_t>(n), kInfCap);
  std::vector<int> parent(static_cast<size_t>(n), -1);
  dist[static_cast<size_t>(from)] = 0;
  bool contaminated = false;
  for (int round = 0; round < n; ++round) {
    bool changed = false;
    for (int r = 0; r < rv.arc_count(); ++r) {
      const ResidualArc& ra = rv.arc(r);
      if (!allowed[static_cast<size_t>(ra.tail)] || !allowed[static_cast<size_t>(ra.head)])
        continue;
      if (dist[static_cast<size_t>(ra.tail)] == kInfCap) continue;
      Cost cand = dist[static_cast<size_t>(ra.tail)] + ra.transit;
      if (cand < dist[static_cast<size_t>(ra.head)]) {
        if (round == n - 1) contaminated = true;
        dist[static_cast<size_t>(ra.head)] = cand;
        parent[static_cast<size_t>(ra.head)] = r;
        changed = true;
      }
    }
    if (!changed) break;
  }
  if (!contaminated && dist[static_cast<size_t>(to)] != kInfCap) {
    std::vector<int> arcs;
    NodeId at = to;
    std::set<NodeId> guard;
    while (at != from && guard.insert(at).second) {
      int r = parent[static_cast<size_t>(at)];
      arcs.push_back(r);
      at = rv.arc(r).tail;
    }
    if (at == from) {
      std::reverse(arcs.begin(), arcs.end());
      return walk_from_arcs(arcs, arc_ends(rv));
    }
    contaminated = true;  // parent chain looped; fall through to BFS
  }
  // Hop-count BFS fallback.
  std::vector<int> par(static_cast<size_t>(n), -2);
  par[static_cast<size_t>(from)] = -1;
  std::vector<NodeId> queue{from};
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    NodeId v = queue[qi];
    for (int r = 0; r < rv.arc_count(); ++r) {
      const ResidualArc& ra = rv.arc(r);
      if (ra.tail != v) continue;
      if (!allowed[static_cast<size_t>(ra.head)] || !allowed[static_cast<size_t>(ra.tail)])
        continue;
      if (par[static_cast<size_t>(ra.head)] != -2) continue;
      par[static_cast<size_t>(ra.head)] = r;
      queue.push_back(ra.head);
    }
  }
  if (par[static_cast<size_t>(to)] == -2) return std::nullopt;
  std::vector<int> arcs;
  for (NodeId at = to; at != from;) {
    int r = par[static_cast<size_t>(at)];
    arcs.push_back(r);
    at = rv.arc(r).tail;
  }
  std::reverse(arcs.begin(), arcs.end());
  return walk_from_arcs(arcs, arc_ends(rv));
}

// Rotation of a cycle minimizing the height span (ties by start node id).
Walk min_span_rotation(const ResidualGraph& rv, const Walk& cycle) {
  size_t n = cycle.arcs.size();
  Walk best;
  Transit best_span = 0;
  NodeId best_start = -1;
  for (size_t s = 0; s < n; ++s) {
    Walk cand;
    for (size_t i = 0; i <= n; ++i) cand.nodes.push_back(cycle.nodes[(s + i) % n]);
    cand.nodes[n] = cand.nodes[0];
    for (size_t i = 0; i < n; ++i) cand.arcs.push_back(cycle.arcs[(s + i) % n]);
    Transit lo = 0, hi = 0, h = 0;
    for (int r : cand.arcs) {
      h += rv.arc(r).transit;
      lo = std::min(lo, h);
      hi = std::max(hi, h);
    }
    Transit span = hi - lo;
    if (best.nodes.empty() || span < best_span ||
        (span == best_span && cand.nodes.front() < best_start)) {
      best = cand;
      best_span = span;
      best_start = cand.nodes.front();
    }
  }
  return best;
}

class Driver {
 public:
  Driver(const NormalizedNetwork& norm, int horizon, const SolveOptions& opts)
      : norm_(norm), horizon_(horizon), opts_(opts) {
    bounds_ = horizon_bounds(norm.base);
    ten_ = std::make_unique<TimeExpandedNetwork>(build_time_expanded(norm, horizon));
    cut_ = cut_arcs(norm.base);
  }

  SolveResult run() {
    seed_phase();
    bool ok11 = false, ok12 = false;
    if (horizon_ > bounds_.sum_transit) {
      ok11 = step11();
      if (ok11) ok12 = step12();
    } else {
      degraded_ = true;
      note_entry("phases skipped: horizon within total transit time");
    }
    step2();
    finalize(ok11, ok12);

    SolveResult result;
    result.ten = std::move(ten_);
    result.flow = f_;
    result.value = flow_value(result.ten->net, f_);
    result.cost = flow_cost(result.ten->net, f_);
    result.bounds = bounds_;
    result.certificates = cert_;
    result.log = std::move(log_);
    return result;
  }

 private:
  const NormalizedNetwork& norm_;
  int horizon_;
  SolveOptions opts_;
  HorizonBounds bounds_;
  std::unique_ptr<TimeExpandedNetwork> ten_;
  CutArcSet cut_;
  StaticFlow f_;
  Cap seed_value_ = 0;
  std::optional<RepeatedInterval> iv_;
  IterationLog log_;
  SolveCertificates cert_;
  bool degraded_ = false;

  // Step-2 bookkeeping: the net multiset of canceled residual copies,
  // relative to the flow frozen at step-2 entry.
  StaticFlow frozen_;
  std::map<SignedArc, Cap> stack_;

  FlowOverTime fot() const { return {ten_.get(), f_}; }

  void note_entry(const std::string& note) {
    LogEntry e;
    e.phase = LogEntry::Phase::Seed;
    e.note = note;
    e.cost_before = e.cost_after = flow_cost(ten_->net, f_);
    e.value = flow_value(ten_->net, f_);
    log_.entries.push_back(std::move(e));
  }

  void refresh_interval(std::optional<std::pair<int, int>> predicted) {
    auto ivs = check_repeated(fot());
    iv_.reset();
    if (ivs.empty()) return;
    if (predicted && predicted->second - predicted->first >= 2) {
      for (const auto& iv : ivs) {
        if (iv.theta1 <= predicted->first && predicted->second <= iv.theta2) {
          iv_ = iv;
          return;
        }
      }
    }
    const RepeatedInterval* best = &ivs.front();
    for (const auto& iv : ivs)
      if (iv.span() > best->span()) best = &iv;
    iv_ = *best;
  }

  StaticFlow phi() const {
    require(iv_.has_value(), ErrorKind::NotRepeated, "no certified repeated interval");
    return phi_project(fot(), *iv_, norm_.base);
  }

  void assert_no_negative_transit_cycle(const ResidualGraph& base_rv,
                                        const std::vector<char>* nodes) {
    auto cyc = find_negative_cycle(base_rv, residual_transit_weights(base_rv), nodes, nullptr);
    require(!cyc.has_value(), ErrorKind::InternalInvariant,
            "negative-transit cycle where none may exist");
  }

  LogEntry start_entry(LogEntry::Phase phase) {
    LogEntry e;
    e.phase = phase;
    e.iteration = static_cast<int>(log_.entries.size());
    e.cost_before = flow_cost(ten_->net, f_);
    if (iv_) {
      e.interval_before_lo = iv_->theta1;
      e.interval_before_hi = iv_->theta2;
    }
    return e;
  }

  void finish_entry(LogEntry& e) {
    e.cost_after = flow_cost(ten_->net, f_);
    e.value = flow_value(ten_->net, f_);
    require(e.value == seed_value_, ErrorKind::InternalInvariant,
            "flow value drifted from the seed value");
    if (iv_) {
      e.interval_after_lo = iv_->theta1;
      e.interval_after_hi = iv_->theta2;
    }
    log_.entries.push_back(std::move(e));
  }

  void seed_phase() {
    SeedResult seed = ford_fulkerson_seed(norm_, *ten_);
    f_ = seed.ten_flow;
    seed_value_ = seed.value;
    refresh_interval(std::nullopt);

    LogEntry e;
    e.phase = LogEntry::Phase::Seed;
    e.cost_before = e.cost_after = flow_cost(ten_->net, f_);
    e.value = seed_value_;
    if (iv_) {
      e.interval_after_lo = iv_->theta1;
      e.interval_after_hi = iv_->theta2;
    }
    log_.entries.push_back(std::move(e));

    require(is_maximum(ten_->net, f_), ErrorKind::InternalInvariant,
            "seed is not a maximum flow over time");
    if (horizon_ > bounds_.sum_transit && iv_) {
      StaticFlow x = phi();
      require(is_maximum(norm_.base, x), ErrorKind::InternalInvariant,
              "seed projection is not a maximum static flow");
      ResidualGraph base_rv = residual(norm_.base, x);
      assert_no_negative_transit_cycle(base_rv, nullptr);
    }
  }

  // Mask for the step-1.1 scan window: arc copies (no super arcs) inside
  // [theta1, theta1 + sum_tau].
  std::optional<std::vector<int>> find_window_cycle(const ResidualGraph& ten_rv, int window_hi) {
    std::vector<char> mask = band_residual_mask(*ten_, ten_rv, iv_->theta1, window_hi);
    for (int r = 0; r < ten_rv.arc_count(); ++r) {
      const auto& inf = ten_->info[static_cast<size_t>(ten_rv.arc(r).base)];
      if (inf.kind != TimeExpandedNetwork::ArcKind::Copy) mask[static_cast<size_t>(r)] = 0;
    }
    return find_negative_cycle(ten_rv, residual_cost_weights(ten_rv), nullptr, &mask);
  }

  bool step11() {
    Cost guard = checked_add(checked_mul(2, bounds_.sum_cost_capacity), 4);
    for (Cost iter = 0;; ++iter) {
      require(iter <= guard, ErrorKind::InternalInvariant,
              "step 1.1 exceeded its iteration bound");
      if (!iv_) {
        note_entry("step 1.1 halted: no certified repeated interval");
        degraded_ = true;
        return false;
      }
      int window_hi = iv_->theta1 + static_cast<int>(bounds_.sum_transit);
      if (window_hi > iv_->theta2) {
        note_entry("step 1.1 halted: interval shorter than the scan window");
        degraded_ = true;
        return false;
      }

      StaticFlow x = phi();
      ResidualGraph base_rv = residual(norm_.base, x);
      assert_no_negative_transit_cycle(base_rv, nullptr);

      ResidualGraph ten_rv = residual(ten_->net, f_);
      auto window_cycle = find_window_cycle(ten_rv, window_hi);
      if (!window_cycle) {
        cert_.phase11_clean_exit = true;
        // No negative zero-transit cycle remains anywhere; in particular none
        // whose projection stays between the minimum cuts.
        cert_.post11_no_zero_transit_negative = true;
        return true;
      }

      Walk ten_cycle = walk_from_arcs(*window_cycle, arc_ends(ten_rv));
      Walk projected;
      try {
        projected = project_walk(*ten_, ten_rv, base_rv, ten_cycle, &*iv_);
      } catch (const Error& err) {
        if (err.kind() != ErrorKind::OutsideBand) throw;
        note_entry("step 1.1 halted: window cycle left the band");
        degraded_ = true;
        return false;
      }
      WalkDecomposition dec = decompose_walk(projected, arc_ends(base_rv));
      require(dec.path.arcs.empty(), ErrorKind::InternalInvariant,
              "projected cycle decomposed with a path part");
      const Walk* chosen = nullptr;
      for (const Walk& c : dec.cycles) {
        Transit t = cycle_transit(base_rv, c.arcs);
        require(t >= 0, ErrorKind::InternalInvariant,
                "negative-transit cycle in a zero-transit projection");
        require(t == 0, ErrorKind::InternalInvariant,
                "nonzero-transit cycle in a zero-transit projection");
        if (!chosen && cycle_cost(base_rv, c.arcs) < 0) chosen = &c;
      }
      require(chosen != nullptr, ErrorKind::InternalInvariant,
              "projection of a negative cycle has no negative cycle");

      LogEntry e = start_entry(LogEntry::Phase::Step11);
      e.cycle_cost = cycle_cost(base_rv, chosen->arcs);
      e.cycle_transit = 0;
      Cap amount = cycle_capacity(base_rv, chosen->arcs);
      HeightProfile hb = base_heights(base_rv, *chosen);
      e.cycle_height = hb.span;
      for (int r : chosen->arcs)
        if (cut_.mask[static_cast<size_t>(base_rv.arc(r).base)]) e.touches_cut = true;
      require(!e.touches_cut, ErrorKind::InternalInvariant,
              "step-1 cycle touches a minimum-cut arc");

      std::vector<Walk> family;
      try {
        family = lift_zero_cycle_family(base_rv, ten_rv, *ten_, *chosen, *iv_);
      } catch (const Error& err) {
        if (err.kind() != ErrorKind::IntervalTooSmall) throw;
        note_entry("step 1.1 halted: interval cannot host the lift family");
        degraded_ = true;
        return false;
      }
      e.family_size = static_cast<int>(family.size());
      IncidenceVector delta = zero_incidence(ten_rv.arc_count());
      for (const Walk& w : family)
        for (int r : w.arcs) delta[r] += 1;
      StaticFlow before_phi = x;
      f_ = augment(ten_->net, f_, ten_rv, delta, amount);

      std::pair<int, int> predicted{iv_->theta1 + static_cast<int>(hb.span),
                                    iv_->theta2 - static_cast<int>(hb.span)};
      refresh_interval(predicted);
      if (iv_) {
        // The projection must commute with the family augmentation.
        StaticFlow after_phi = phi();
        std::vector<Cap> expect = before_phi.on_arc;
        for (int r : chosen->arcs) {
          const ResidualArc& ra = base_rv.arc(r);
          expect[static_cast<size_t>(ra.base)] += ra.backward ? -amount : amount;
        }
        require(after_phi.on_arc == expect, ErrorKind::InternalInvariant,
                "projection does not commute with the family augmentation");
      }
      finish_entry(e);
    }
  }

  bool step12() {
    Cost guard = checked_add(checked_mul(2, bounds_.sum_cost_capacity), 4);
    for (Cost iter = 0;; ++iter) {
      require(iter <= guard, ErrorKind::InternalInvariant,
              "step 1.2 exceeded its iteration bound");
      if (!iv_) {
        note_entry("step 1.2 halted: no certified repeated interval");
        degraded_ = true;
        return false;
      }

      StaticFlow x = phi();
      ReachabilityPartition part = reachability_partition(norm_.base, x);
      ResidualGraph base_rv = residual(norm_.base, x);
      assert_no_negative_transit_cycle(base_rv, &part.between);

      auto search = lex_min_eulerian_subgraph(base_rv, part);
      if (!search) {
        cert_.phase12_clean_exit = true;
        ResidualGraph ten_rv = residual(ten_->net, f_);
        auto mask = band_residual_mask(*ten_, ten_rv, iv_->theta1, iv_->theta2);
        auto leftover = find_negative_cycle(ten_rv, residual_cost_weights(ten_rv), nullptr, &mask);
        require(!leftover.has_value(), ErrorKind::InternalInvariant,
                "band still has a negative cycle after step 1.2");
        cert_.post12_band_clean = true;
        return true;
      }

      LogEntry e = start_entry(LogEntry::Phase::Step12);
      e.cycle_cost = search->cost;
      e.cycle_transit = search->transit;
      for (int r = 0; r < base_rv.arc_count(); ++r)
        if (search->subgraph[r] > 0 && cut_.mask[static_cast<size_t>(base_rv.arc(r).base)])
          e.touches_cut = true;
      require(!e.touches_cut, ErrorKind::InternalInvariant,
              "minimal Eulerian subgraph touches a minimum-cut arc");

      auto cycles = decompose_eulerian(search->subgraph, base_rv.node_count, arc_ends(base_rv));
      std::vector<std::pair<std::vector<SignedArc>, std::vector<NodeId>>> staged;
      for (const auto& cyc : cycles) {
        Walk w = walk_from_arcs(cyc, arc_ends(base_rv));
        if (cycle_cost(base_rv, cyc) == 0) {
          e.note += "[zero-cost cycle skipped]";
          continue;
        }
        staged.emplace_back(signed_arcs_of(base_rv, cyc), w.nodes);
      }

      bool exhausted = false;
      bool augmented_any = false;
      for (const auto& [signed_cycle, nodes] : staged) {
        if (!iv_) {
          exhausted = true;
          break;
        }
        try {
          process_reachable_cycle(signed_cycle, e);
          augmented_any = true;
        } catch (const Error& err) {
          if (err.kind() == ErrorKind::IntervalTooSmall ||
              err.kind() == ErrorKind::ConnectorsMissing) {
            e.note += std::string("[family aborted: ") + err.what() + "]";
            exhausted = true;
            break;
          }
          throw;
        }
      }
      if (augmented_any) {
        finish_entry(e);
      } else {
        note_entry("step 1.2 halted before any augmentation: " + e.note);
      }
      if (exhausted) {
        degraded_ = true;
        return false;
      }
    }
  }

  // Lift one unit copy of a negative reachable cycle and augment along its
  // family. The signed arcs are resolved against the current residual.
  void process_reachable_cycle(const std::vector<SignedArc>& signed_cycle, LogEntry& e) {
    StaticFlow x = phi();
    ResidualGraph base_rv = residual(norm_.base, x);
    ResidualGraph ten_rv = residual(ten_->net, f_);
    Walk cycle = walk_from_arcs(refind_arcs(base_rv, signed_cycle), arc_ends(base_rv));
    Cost c = cycle_cost(base_rv, cycle.arcs);
    Transit t = cycle_transit(base_rv, cycle.arcs);
    require(c < 0, ErrorKind::InternalInvariant, "family cycle lost its negative cost");

    StaticFlow before_phi = x;
    std::pair<int, int> predicted;
    if (t == 0) {
      HeightProfile hb = base_heights(base_rv, cycle);
      std::vector<Walk> family = lift_zero_cycle_family(base_rv, ten_rv, *ten_, cycle, *iv_);
      IncidenceVector delta = zero_incidence(ten_rv.arc_count());
      for (const Walk& w : family)
        for (int r : w.arcs) delta[r] += 1;
      f_ = augment(ten_->net, f_, ten_rv, delta, 1);
      e.family_size += static_cast<int>(family.size());
      predicted = {iv_->theta1 + static_cast<int>(hb.span),
                   iv_->theta2 - static_cast<int>(hb.span)};
    } else {
      auto scc_s = strongly_connected_with(base_rv, norm_.base.source);
      auto scc_t = strongly_connected_with(base_rv, norm_.base.sink);
      bool source_side = true;
      for (NodeId v : cycle.nodes)
        if (!scc_s[static_cast<size_t>(v)]) source_side = false;
      if (!source_side)
        for (NodeId v : cycle.nodes)
          require(scc_t[static_cast<size_t>(v)], ErrorKind::InternalInvariant,
                  "family cycle is in neither terminal component");
      const auto& side_set = source_side ? scc_s : scc_t;
      NodeId terminal = source_side ? norm_.base.source : norm_.base.sink;

      Walk rotated = min_span_rotation(base_rv, cycle);
      NodeId anchor = rotated.nodes.front();
      auto p1 = connector_path(base_rv, side_set, terminal, anchor);
      auto p2 = connector_path(base_rv, side_set, anchor, terminal);
      require(p1.has_value() && p2.has_value(), ErrorKind::ConnectorsMissing,
              "no connector paths between the terminal and the cycle");

      ReachableFamily family = lift_reachable_cycle_family(
          base_rv, ten_rv, *ten_, rotated, *p1, *p2, *iv_, source_side,
          checked_mul(2, bounds_.sum_cost_capacity));
      for (const Walk& w : family.cycles)
        require(cycle_cost(ten_rv, w.arcs) < 0, ErrorKind::InternalInvariant,
                "lifted family cycle is not negative");
      IncidenceVector delta = zero_incidence(ten_rv.arc_count());
      for (const Walk& w : family.cycles)
        for (int r : w.arcs) delta[r] += 1;
      f_ = augment(ten_->net, f_, ten_rv, delta, 1);
      e.family_size += static_cast<int>(family.cycles.size());
      e.winding = std::max(e.winding, family.winding);
      Transit margin = checked_mul(3, bounds_.sum_transit);
      predicted = {iv_->theta1 + static_cast<int>(margin),
                   iv_->theta2 - static_cast<int>(margin)};
    }

    refresh_interval(predicted);
    if (iv_) {
      StaticFlow after_phi = phi();
      std::vector<Cap> expect = before_phi.on_arc;
      for (const SignedArc& sa : signed_cycle)
        expect[static_cast<size_t>(sa.base)] += sa.backward ? -1 : 1;
      require(after_phi.on_arc == expect, ErrorKind::InternalInvariant,
              "projection does not commute with the family augmentation");
    }
  }

  // ---- Step 2 ----

  ArcEnds stack_ends() const {
    return [this](int idx) {
      const SignedArc& sa = stack_keys_[static_cast<size_t>(idx)];
      const Arc& arc = ten_->net.arc(sa.base);
      return sa.backward ? std::make_pair(arc.head, arc.tail)
                         : std::make_pair(arc.tail, arc.head);
    };
  }

  std::vector<SignedArc> stack_keys_;

  Cost signed_cost(const SignedArc& sa) const {
    Cost c = ten_->net.arc(sa.base).cost;
    return sa.backward ? -c : c;
  }

  void merge_into_stack(const std::vector<SignedArc>& arcs) {
    for (const SignedArc& sa : arcs) {
      auto opp = stack_.find(sa.opposite());
      if (opp != stack_.end() && opp->second > 0) {
        if (--opp->second == 0) stack_.erase(opp);
        continue;
      }
      Cap cap = 0;
      if (sa.backward)
        cap = frozen_[sa.base];
      else
        cap = is_infinite(ten_->net.arc(sa.base).capacity)
                  ? kInfCap
                  : ten_->net.arc(sa.base).capacity - frozen_[sa.base];
      Cap next = stack_[sa] + 1;
      require(is_infinite(cap) || next <= cap, ErrorKind::InternalInvariant,
              "step-2 bookkeeping exceeds the frozen residual capacity");
      stack_[sa] = next;
    }
  }

  void remove_from_stack(const std::vector<SignedArc>& arcs) {
    for (const SignedArc& sa : arcs) {
      auto it = stack_.find(sa);
      require(it != stack_.end() && it->second > 0, ErrorKind::InternalInvariant,
              "removing an arc the step-2 stack does not hold");
      if (--it->second == 0) stack_.erase(it);
    }
  }

  void apply_signed(const std::vector<SignedArc>& arcs, Cap sign) {
    for (const SignedArc& sa : arcs) f_[sa.base] += (sa.backward ? -sign : sign);
    check_feasible(ten_->net, f_);
    f_.value = flow_value(ten_->net, f_);
  }

  // Decompose the current stack into cycles of signed arcs.
  std::vector<std::vector<SignedArc>> stack_cycles() {
    stack_keys_.clear();
    IncidenceVector h = zero_incidence(0);
    for (const auto& [sa, mult] : stack_) {
      stack_keys_.push_back(sa);
      h.mult.push_back(mult);
    }
    auto cycles = decompose_eulerian(h, ten_->net.node_count, stack_ends());
    std::vector<std::vector<SignedArc>> out;
    for (const auto& cyc : cycles) {
      std::vector<SignedArc> sc;
      for (int idx : cyc) sc.push_back(stack_keys_[static_cast<size_t>(idx)]);
      out.push_back(std::move(sc));
    }
    return out;
  }

  void step2() {
    frozen_ = f_;
    stack_.clear();
    Cost guard =
        checked_add(checked_mul(checked_mul(2, horizon_), bounds_.sum_cost_capacity), 8);
    for (Cost iter = 0;; ++iter) {
      require(iter <= guard, ErrorKind::InternalInvariant,
              "step 2 exceeded its iteration bound");
      ResidualGraph ten_rv = residual(ten_->net, f_);
      std::vector<Cost> weights = residual_cost_weights(ten_rv);

      std::vector<std::pair<int, int>> bands;
      if (iv_) {
        bands.push_back({1, iv_->theta2});
        bands.push_back({iv_->theta1, horizon_});
      } else {
        bands.push_back({1, horizon_});
      }

      std::optional<std::vector<int>> chosen;
      bool use_exact = opts_.step2_strategy == SolveOptions::Step2Strategy::Exact &&
                       norm_.original_node_count <= opts_.max_exact_nodes;
      for (const auto& [lo, hi] : bands) {
        std::vector<char> mask = band_residual_mask(*ten_, ten_rv, lo, hi);
        auto quick = find_negative_cycle(ten_rv, weights, nullptr, &mask);
        if (!quick) continue;
        std::optional<std::vector<int>> found;
        if (use_exact) found = exact_min_negative_cycle(ten_rv, weights, mask);
        if (!found) found = quick;  // search budget ran out; any negative cycle works
        if (!chosen) {
          chosen = found;
          continue;
        }
        Cost a = cycle_cost(ten_rv, *chosen);
        Cost b = cycle_cost(ten_rv, *found);
        if (b < a || (b == a && *found < *chosen)) chosen = found;
      }
      if (!chosen) break;

      LogEntry e = start_entry(LogEntry::Phase::Step2);
      Walk cycle = walk_from_arcs(*chosen, arc_ends(ten_rv));

      if (iv_) {
        e.h_i = std::max<std::int64_t>(iv_->theta1, horizon_ - iv_->theta2);
        e.height_bound = bounds_.growth_bound(e.h_i);
        if (iv_->span() <= 2 * e.height_bound) {
          e.note += "[interval below the step-2 analysis bound]";
          degraded_ = true;
        }
        StaticFlow x = phi();
        ResidualGraph base_rv = residual(norm_.base, x);
        std::string note;
        Walk packed = compress_cycle(*ten_, ten_rv, base_rv, cycle, *iv_, &note);
        if (!note.empty()) e.note += note;
        if (packed.arcs != cycle.arcs) {
          e.compressed = true;
          cycle = packed;
        }
        auto comps = repeated_components(*ten_, ten_rv, cycle, *iv_);
        e.component_count = static_cast<int>(comps.size());
        bool below = false, above = false;
        for (NodeId v : cycle.nodes) {
          if (ten_->is_super(v)) continue;
          if (ten_->layer_of(v) < iv_->theta1) below = true;
          if (ten_->layer_of(v) > iv_->theta2) above = true;
        }
        e.three_area = below && above;
        for (const auto& comp : comps) {
          HeightProfile hp = ten_heights(*ten_, comp.walk);
          e.max_component_height = std::max(e.max_component_height, hp.span);
        }
      }

      IncidenceVector delta = zero_incidence(ten_rv.arc_count());
      for (int r : cycle.arcs) delta[r] += 1;
      f_ = augment(ten_->net, f_, ten_rv, delta, 1);

      merge_into_stack(signed_arcs_of_ten(ten_rv, cycle.arcs));
      auto cycles = stack_cycles();
      for (const auto& k : cycles) {
        Cost kc = 0;
        for (const SignedArc& sa : k) kc = checked_add(kc, signed_cost(sa));
        if (kc == 0) {
          // Undo the zero-cost combination and drop it from the stack: the
          // flow stays at frozen + stack afterwards.
          apply_signed(k, -1);
          remove_from_stack(k);
          ++e.flushed_zero_cycles;
        }
      }
      for (const auto& k : stack_cycles()) {
        Cost kc = 0;
        for (const SignedArc& sa : k) kc = checked_add(kc, signed_cost(sa));
        e.h_cycle_costs.push_back(kc);
      }

      // The canceled cycle reaches at most J(h_i) deep into the repeated
      // part, so the interval shrinks by at most that much per side.
      std::optional<std::pair<int, int>> predicted;
      if (iv_ && e.height_bound > 0 &&
          iv_->span() > 2 * static_cast<int>(e.height_bound) + 2) {
        predicted = {iv_->theta1 + static_cast<int>(e.height_bound),
                     iv_->theta2 - static_cast<int>(e.height_bound)};
      }
      refresh_interval(predicted);
      finish_entry(e);
    }
  }

  std::vector<SignedArc> signed_arcs_of_ten(const ResidualGraph& ten_rv,
                                            const std::vector<int>& arcs) const {
    std::vector<SignedArc> out;
    for (int r : arcs) out.push_back({ten_rv.arc(r).base, ten_rv.arc(r).backward});
    return out;
  }

  void finalize(bool ok11, bool ok12) {
    for (int guard = 0;; ++guard) {
      require(guard < 1000000, ErrorKind::InternalInvariant, "final scan failed to converge");
      ResidualGraph ten_rv = residual(ten_->net, f_);
      auto cyc = find_negative_cycle(ten_rv, residual_cost_weights(ten_rv));
      if (!cyc) break;
      bool by_the_book = !degraded_ && ok11 && ok12 &&
                         static_cast<Cost>(horizon_) > bounds_.threshold;
      require(!by_the_book, ErrorKind::OptimalityViolation,
              "negative cycle survived the final scan at a guaranteed horizon");
      LogEntry e = start_entry(LogEntry::Phase::Fallback);
      Cap amount = cycle_capacity(ten_rv, *cyc);
      require(!is_infinite(amount), ErrorKind::Unbounded, "infinite negative cycle");
      f_ = augment_cycle(ten_->net, f_, ten_rv, *cyc, amount);
      cert_.fallback_cancellations += 1;
      refresh_interval(std::nullopt);
      finish_entry(e);
    }

    check_feasible(ten_->net, f_);
    cert_.feasible = true;
    cert_.maximal = is_maximum(ten_->net, f_);
    {
      ResidualGraph ten_rv = residual(ten_->net, f_);
      cert_.residual_clean =
          !find_negative_cycle(ten_rv, residual_cost_weights(ten_rv)).has_value();
    }
    require(flow_value(ten_->net, f_) == seed_value_, ErrorKind::InternalInvariant,
            "final value differs from the maximum seed value");

    cert_.repeated = check_repeated(fot());
    cert_.has_interval = !cert_.repeated.empty();
    if (cert_.has_interval) {
      cert_.best_interval = cert_.repeated.front();
      for (const auto& iv : cert_.repeated)
        if (iv.span() > cert_.best_interval.span()) cert_.best_interval = iv;
    }
    cert_.phase11_clean_exit = ok11;
    cert_.phase12_clean_exit = ok12;
    cert_.construction_complete = ok11 && ok12 && !degraded_ &&
                                  cert_.fallback_cancellations == 0;
    cert_.theta_threshold = bounds_.threshold;
    cert_.threshold_met = static_cast<Cost>(horizon_) > bounds_.threshold;
    Cost t1 = bounds_.step1_exit_margin;
    cert_.predicted_min_span = static_cast<Cost>(horizon_) -
                               checked_mul(2, checked_add(t1, bounds_.growth_bound(t1)));
    cert_.interval_bound_holds =
        !cert_.threshold_met ||
        (cert_.has_interval && cert_.best_interval.span() >= cert_.predicted_min_span);
  }
};

}  // namespace

SolveResult solve(const NormalizedNetwork& norm, int horizon, const SolveOptions& opts) {
  Driver driver(norm, horizon, opts);
  return driver.run();
}

}  // namespace fot
