#include "fot/static_mcf.hpp"

#include <algorithm>
#include <deque>

namespace fot {

namespace {

// BFS over the residual graph implied by (net, x); parent[v] = (arc, backward).
bool bfs_augmenting_path(const Network& net, const StaticFlow& x,
                         std::vector<std::pair<ArcId, bool>>& parent) {
  parent.assign(static_cast<size_t>(net.node_count), {-1, false});
  std::vector<char> seen(static_cast<size_t>(net.node_count), 0);
  std::deque<NodeId> queue{net.source};
  seen[static_cast<size_t>(net.source)] = 1;
  auto out = net.out_arcs();
  auto in = net.in_arcs();
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    if (v == net.sink) return true;
    for (ArcId a : out[static_cast<size_t>(v)]) {
      const Arc& arc = net.arc(a);
      Cap spare = is_infinite(arc.capacity) ? kInfCap : arc.capacity - x[a];
      if (spare <= 0 || seen[static_cast<size_t>(arc.head)]) continue;
      seen[static_cast<size_t>(arc.head)] = 1;
      parent[static_cast<size_t>(arc.head)] = {a, false};
      queue.push_back(arc.head);
    }
    for (ArcId a : in[static_cast<size_t>(v)]) {
      const Arc& arc = net.arc(a);
      if (x[a] <= 0 || seen[static_cast<size_t>(arc.tail)]) continue;
      seen[static_cast<size_t>(arc.tail)] = 1;
      parent[static_cast<size_t>(arc.tail)] = {a, true};
      queue.push_back(arc.tail);
    }
  }
  return seen[static_cast<size_t>(net.sink)] != 0;
}

}  // namespace

StaticFlow max_flow(const Network& net) {
  net.validate();
  return complete_to_max(net, zero_flow(net));
}

StaticFlow complete_to_max(const Network& net, StaticFlow x) {
  check_feasible(net, x);
  x.value = flow_value(net, x);
  std::vector<std::pair<ArcId, bool>> parent;
  while (bfs_augmenting_path(net, x, parent)) {
    Cap bottleneck = kInfCap;
    for (NodeId v = net.sink; v != net.source;) {
      auto [a, backward] = parent[static_cast<size_t>(v)];
      const Arc& arc = net.arc(a);
      Cap spare = backward ? x[a]
                           : (is_infinite(arc.capacity) ? kInfCap : arc.capacity - x[a]);
      bottleneck = std::min(bottleneck, spare);
      v = backward ? arc.head : arc.tail;
    }
    require(!is_infinite(bottleneck), ErrorKind::Unbounded,
            "infinite-capacity augmenting path");
    for (NodeId v = net.sink; v != net.source;) {
      auto [a, backward] = parent[static_cast<size_t>(v)];
      if (backward) {
        x[a] -= bottleneck;
        v = net.arc(a).head;
      } else {
        x[a] += bottleneck;
        v = net.arc(a).tail;
      }
    }
    x.value += bottleneck;
  }
  return x;
}

bool is_maximum(const Network& net, const StaticFlow& x) {
  std::vector<std::pair<ArcId, bool>> parent;
  return !bfs_augmenting_path(net, x, parent);
}

std::optional<std::vector<int>> find_negative_cycle(const ResidualGraph& rv,
                                                    const std::vector<Cost>& weights) {
  return find_negative_cycle(rv, weights, nullptr, nullptr);
}

std::optional<std::vector<int>> find_negative_cycle(const ResidualGraph& rv,
                                                    const std::vector<Cost>& weights,
                                                    const std::vector<char>* allowed_node,
                                                    const std::vector<char>* allowed_arc) {
  const int n = rv.node_count;
  if (n == 0) return std::nullopt;
  auto arc_ok = [&](int r) {
    if (allowed_arc && !(*allowed_arc)[static_cast<size_t>(r)]) return false;
    const ResidualArc& ra = rv.arc(r);
    if (allowed_node && (!(*allowed_node)[static_cast<size_t>(ra.tail)] ||
                         !(*allowed_node)[static_cast<size_t>(ra.head)]))
      return false;
    return true;
  };

  // All-zero start distances act as a virtual source attached to every node.
  std::vector<Cost> dist(static_cast<size_t>(n), 0);
  std::vector<int> parent_arc(static_cast<size_t>(n), -1);
  NodeId witness = -1;
  for (int round = 0; round < n; ++round) {
    witness = -1;
    for (int r = 0; r < rv.arc_count(); ++r) {
      if (!arc_ok(r)) continue;
      const ResidualArc& ra = rv.arc(r);
      Cost cand = checked_add(dist[static_cast<size_t>(ra.tail)], weights[static_cast<size_t>(r)]);
      if (cand < dist[static_cast<size_t>(ra.head)]) {
        dist[static_cast<size_t>(ra.head)] = cand;
        parent_arc[static_cast<size_t>(ra.head)] = r;
        if (witness < 0) witness = ra.head;
      }
    }
    if (witness < 0) return std::nullopt;
  }

  // A relaxation in round n proves a cycle; n parent steps land inside it.
  NodeId at = witness;
  for (int i = 0; i < n; ++i) at = rv.arc(parent_arc[static_cast<size_t>(at)]).tail;
  std::vector<char> on_cycle(static_cast<size_t>(n), 0);
  std::vector<int> cycle;
  NodeId v = at;
  do {
    on_cycle[static_cast<size_t>(v)] = 1;
    int r = parent_arc[static_cast<size_t>(v)];
    cycle.push_back(r);
    v = rv.arc(r).tail;
  } while (!on_cycle[static_cast<size_t>(v)]);
  require(v == at, ErrorKind::InternalInvariant, "parent walk did not close a cycle");
  std::reverse(cycle.begin(), cycle.end());

  // Rotate so the cycle starts at its smallest node id (deterministic).
  size_t best = 0;
  for (size_t i = 1; i < cycle.size(); ++i)
    if (rv.arc(cycle[i]).tail < rv.arc(cycle[best]).tail) best = i;
  std::rotate(cycle.begin(), cycle.begin() + static_cast<std::ptrdiff_t>(best), cycle.end());

  Cost total = 0;
  for (int r : cycle) total = checked_add(total, weights[static_cast<size_t>(r)]);
  require(total < 0, ErrorKind::InternalInvariant, "extracted cycle is not negative");
  return cycle;
}

std::vector<Cost> residual_cost_weights(const ResidualGraph& rv) {
  std::vector<Cost> w(static_cast<size_t>(rv.arc_count()));
  for (int r = 0; r < rv.arc_count(); ++r) w[static_cast<size_t>(r)] = rv.arc(r).cost;
  return w;
}

std::vector<Cost> residual_transit_weights(const ResidualGraph& rv) {
  std::vector<Cost> w(static_cast<size_t>(rv.arc_count()));
  for (int r = 0; r < rv.arc_count(); ++r) w[static_cast<size_t>(r)] = rv.arc(r).transit;
  return w;
}

StaticFlow min_cost_circulation(const Network& net, const std::vector<Cost>& weights) {
  require(weights.size() == net.arcs.size(), ErrorKind::BadRange, "weight vector length");
  StaticFlow x = zero_flow(net);
  for (int guard = 0;; ++guard) {
    require(guard < 1000000, ErrorKind::InternalInvariant, "circulation failed to converge");
    ResidualGraph rv = residual(net, x);
    std::vector<Cost> w(static_cast<size_t>(rv.arc_count()));
    for (int r = 0; r < rv.arc_count(); ++r) {
      const ResidualArc& ra = rv.arc(r);
      w[static_cast<size_t>(r)] = ra.backward ? -weights[static_cast<size_t>(ra.base)]
                                              : weights[static_cast<size_t>(ra.base)];
    }
    auto cycle = find_negative_cycle(rv, w);
    if (!cycle) break;
    Cap cap = cycle_capacity(rv, *cycle);
    require(!is_infinite(cap), ErrorKind::Unbounded,
            "negative-weight cycle of infinite capacity");
    x = augment_cycle(net, x, rv, *cycle, cap);
  }
  x.value = 0;
  return x;
}

FlowDecomposition decompose_flow(const Network& net, const StaticFlow& x) {
  check_feasible(net, x);
  FlowDecomposition out;
  std::vector<Cap> left = x.on_arc;
  Cap value_left = flow_value(net, x);
  auto out_arcs = net.out_arcs();

  auto next_arc = [&](NodeId v) -> ArcId {
    for (ArcId a : out_arcs[static_cast<size_t>(v)])
      if (left[static_cast<size_t>(a)] > 0) return a;
    return -1;
  };

  auto peel_loop = [&](std::vector<NodeId>& nodes, std::vector<ArcId>& arcs,
                       std::vector<int>& pos_of, int prev) {
    Walk cyc;
    cyc.nodes.assign(nodes.begin() + prev, nodes.end());
    cyc.arcs.assign(arcs.begin() + prev, arcs.end());
    Cap rate = kInfCap;
    for (ArcId ca : cyc.arcs) rate = std::min(rate, left[static_cast<size_t>(ca)]);
    for (ArcId ca : cyc.arcs) left[static_cast<size_t>(ca)] -= rate;
    out.cycles.push_back({cyc, rate});
    for (size_t i = static_cast<size_t>(prev) + 1; i < nodes.size(); ++i)
      pos_of[static_cast<size_t>(nodes[i])] = -1;
    nodes.resize(static_cast<size_t>(prev) + 1);
    arcs.resize(static_cast<size_t>(prev));
  };

  // As long as flow value remains, the positive-flow subgraph carries an
  // s-t path; peel those first (capped by the remaining value), extracting
  // loops met along the way as cycles.
  while (value_left > 0) {
    std::vector<NodeId> nodes{net.source};
    std::vector<ArcId> arcs;
    std::vector<int> pos_of(static_cast<size_t>(net.node_count), -1);
    pos_of[static_cast<size_t>(net.source)] = 0;
    NodeId at = net.source;
    while (at != net.sink) {
      ArcId a = next_arc(at);
      require(a >= 0, ErrorKind::InternalInvariant, "flow trace stuck before the sink");
      NodeId to = net.arc(a).head;
      arcs.push_back(a);
      nodes.push_back(to);
      int prev = pos_of[static_cast<size_t>(to)];
      if (prev >= 0) {
        peel_loop(nodes, arcs, pos_of, prev);
        at = to;
        continue;
      }
      pos_of[static_cast<size_t>(to)] = static_cast<int>(nodes.size()) - 1;
      at = to;
    }
    Cap rate = value_left;
    for (ArcId a : arcs) rate = std::min(rate, left[static_cast<size_t>(a)]);
    for (ArcId a : arcs) left[static_cast<size_t>(a)] -= rate;
    value_left -= rate;
    Walk w;
    w.nodes = std::move(nodes);
    w.arcs = std::move(arcs);
    out.paths.push_back({w, rate});
  }

  // What remains is a circulation; trace until a node repeats and peel.
  for (NodeId v = 0; v < net.node_count; ++v) {
    while (next_arc(v) >= 0) {
      std::vector<NodeId> nodes{v};
      std::vector<ArcId> arcs;
      std::vector<int> pos_of(static_cast<size_t>(net.node_count), -1);
      pos_of[static_cast<size_t>(v)] = 0;
      NodeId at = v;
      while (true) {
        ArcId a = next_arc(at);
        require(a >= 0, ErrorKind::InternalInvariant, "circulation trace stuck");
        NodeId to = net.arc(a).head;
        arcs.push_back(a);
        nodes.push_back(to);
        int prev = pos_of[static_cast<size_t>(to)];
        if (prev >= 0) {
          peel_loop(nodes, arcs, pos_of, prev);
          break;
        }
        pos_of[static_cast<size_t>(to)] = static_cast<int>(nodes.size()) - 1;
        at = to;
      }
    }
  }
  return out;
}

std::vector<char> reachable_from(const ResidualGraph& rv, NodeId v) {
  std::vector<char> seen(static_cast<size_t>(rv.node_count), 0);
  auto out = rv.out_arcs();
  std::deque<NodeId> queue{v};
  seen[static_cast<size_t>(v)] = 1;
  while (!queue.empty()) {
    NodeId at = queue.front();
    queue.pop_front();
    for (int r : out[static_cast<size_t>(at)]) {
      NodeId to = rv.arc(r).head;
      if (!seen[static_cast<size_t>(to)]) {
        seen[static_cast<size_t>(to)] = 1;
        queue.push_back(to);
      }
    }
  }
  return seen;
}

std::vector<char> reaches(const ResidualGraph& rv, NodeId v) {
  std::vector<char> seen(static_cast<size_t>(rv.node_count), 0);
  std::vector<std::vector<int>> in(static_cast<size_t>(rv.node_count));
  for (int r = 0; r < rv.arc_count(); ++r) in[static_cast<size_t>(rv.arc(r).head)].push_back(r);
  std::deque<NodeId> queue{v};
  seen[static_cast<size_t>(v)] = 1;
  while (!queue.empty()) {
    NodeId at = queue.front();
    queue.pop_front();
    for (int r : in[static_cast<size_t>(at)]) {
      NodeId from = rv.arc(r).tail;
      if (!seen[static_cast<size_t>(from)]) {
        seen[static_cast<size_t>(from)] = 1;
        queue.push_back(from);
      }
    }
  }
  return seen;
}

std::vector<char> strongly_connected_with(const ResidualGraph& rv, NodeId v) {
  auto fwd = reachable_from(rv, v);
  auto bwd = reaches(rv, v);
  std::vector<char> both(static_cast<size_t>(rv.node_count), 0);
  for (NodeId u = 0; u < rv.node_count; ++u)
    both[static_cast<size_t>(u)] = fwd[static_cast<size_t>(u)] && bwd[static_cast<size_t>(u)];
  return both;
}

ReachabilityPartition reachability_partition(const Network& net, const StaticFlow& x) {
  check_feasible(net, x);
  require(is_maximum(net, x), ErrorKind::NotMaximum,
          "reachability partition requires a maximum flow");
  ResidualGraph rv = residual(net, x);
  ReachabilityPartition part;
  part.from_source = reachable_from(rv, net.source);
  part.to_sink = reaches(rv, net.sink);
  part.between.assign(static_cast<size_t>(net.node_count), 0);
  for (NodeId v = 0; v < net.node_count; ++v) {
    bool s = part.from_source[static_cast<size_t>(v)];
    bool t = part.to_sink[static_cast<size_t>(v)];
    require(!(s && t), ErrorKind::InternalInvariant,
            "source and sink parts intersect; flow cannot be maximum");
    part.between[static_cast<size_t>(v)] = !s && !t;
  }
  return part;
}

CutArcSet cut_arcs(const Network& net) {
  StaticFlow x = max_flow(net);
  ResidualGraph rv = residual(net, x);
  CutArcSet out;
  out.mask.assign(net.arcs.size(), 0);
  std::vector<std::vector<char>> reach_cache(static_cast<size_t>(net.node_count));
  for (ArcId a = 0; a < net.arc_count(); ++a) {
    const Arc& arc = net.arc(a);
    if (is_infinite(arc.capacity) || x[a] != arc.capacity || arc.capacity == 0) continue;
    auto& reach = reach_cache[static_cast<size_t>(arc.tail)];
    if (reach.empty()) reach = reachable_from(rv, arc.tail);
    if (!reach[static_cast<size_t>(arc.head)]) {
      out.mask[static_cast<size_t>(a)] = 1;
      out.arcs.push_back(a);
    }
  }
  return out;
}

std::optional<EulerianSearchResult> lex_min_eulerian_subgraph(const ResidualGraph& rv,
                                                              const ReachabilityPartition& part) {
  const Network& net = *rv.net;
  // Transit spread of any Eulerian subgraph stays below 2 * sum(tau) * sum(u),
  // so this factor makes cost strictly dominate transit in a single weight.
  Cap sum_u = 0;
  for (const Arc& a : net.arcs) {
    require(!is_infinite(a.capacity), ErrorKind::UnboundedExpansion,
            "eulerian search needs finite capacities");
    sum_u = checked_add(sum_u, a.capacity);
  }
  Cost scale = checked_add(1, checked_mul(2, checked_mul(net.total_transit(), sum_u)));

  auto scc_s = strongly_connected_with(rv, net.source);
  auto scc_t = strongly_connected_with(rv, net.sink);
  for (NodeId v = 0; v < net.node_count; ++v) {
    require(!(scc_s[static_cast<size_t>(v)] && scc_t[static_cast<size_t>(v)]),
            ErrorKind::InternalInvariant, "source/sink components intersect");
    require(!scc_s[static_cast<size_t>(v)] || part.in_source_part(v),
            ErrorKind::InternalInvariant, "source component escapes the source part");
    require(!scc_t[static_cast<size_t>(v)] || part.in_sink_part(v),
            ErrorKind::InternalInvariant, "sink component escapes the sink part");
  }

  EulerianSearchResult result;
  result.subgraph = zero_incidence(rv.arc_count());

  for (const auto& side : {scc_s, scc_t}) {
    Network sub;
    sub.node_count = rv.node_count;
    sub.source = net.source;
    sub.sink = net.sink;
    std::vector<int> to_res;
    std::vector<Cost> weights;
    for (int r = 0; r < rv.arc_count(); ++r) {
      const ResidualArc& ra = rv.arc(r);
      if (!side[static_cast<size_t>(ra.tail)] || !side[static_cast<size_t>(ra.head)]) continue;
      sub.arcs.push_back({ra.tail, ra.head, ra.capacity, 0, ra.cost});
      to_res.push_back(r);
      weights.push_back(checked_add(checked_mul(ra.cost, scale), ra.transit));
    }
    if (sub.arcs.empty()) continue;
    StaticFlow circ = min_cost_circulation(sub, weights);
    for (ArcId a = 0; a < sub.arc_count(); ++a) {
      if (circ[a] == 0) continue;
      int r = to_res[static_cast<size_t>(a)];
      result.subgraph[r] += circ[a];
      result.cost = checked_add(result.cost, checked_mul(rv.arc(r).cost, circ[a]));
      result.transit = checked_add(result.transit, checked_mul(rv.arc(r).transit, circ[a]));
    }
  }

  if (result.subgraph.empty()) return std::nullopt;
  require(result.cost < 0, ErrorKind::InternalInvariant,
          "nonempty lex-min Eulerian subgraph with nonnegative cost");

  // Every decomposition cycle must cost at most zero, with at least one strict.
  auto cycles = decompose_eulerian(result.subgraph, rv.node_count, arc_ends(rv));
  bool strict = false;
  for (const auto& cyc : cycles) {
    Cost c = cycle_cost(rv, cyc);
    require(c <= 0, ErrorKind::InternalInvariant,
            "positive-cost cycle inside a minimal Eulerian subgraph");
    if (c < 0) strict = true;
    bool in_s = scc_s[static_cast<size_t>(rv.arc(cyc.front()).tail)] != 0;
    for (int r : cyc) {
      const auto& set = in_s ? scc_s : scc_t;
      require(set[static_cast<size_t>(rv.arc(r).tail)] && set[static_cast<size_t>(rv.arc(r).head)],
              ErrorKind::InternalInvariant, "cycle is not source- or sink-reachable");
    }
  }
  require(strict, ErrorKind::InternalInvariant, "no strictly negative cycle in subgraph");
  return result;
}

}  // namespace fot
