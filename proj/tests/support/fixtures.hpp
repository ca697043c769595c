#pragma once

#include <random>
#include <vector>

#include "fot/network.hpp"
#include "fot/static_mcf.hpp"

namespace fot::testing {

// Single arc s->t with u=2, tau=1, c=3.
inline Network fix1() {
  Network n;
  n.node_count = 2;
  n.source = 0;
  n.sink = 1;
  n.arcs.push_back({0, 1, 2, 1, 3});
  return n;
}

// s->v bottleneck, two parallel v->t arcs: b1 expensive, b2 free.
inline Network fix2() {
  Network n;
  n.node_count = 3;
  n.source = 0;
  n.sink = 2;
  n.arcs.push_back({0, 1, 1, 1, 0});   // s->v
  n.arcs.push_back({1, 2, 1, 1, 10});  // b1
  n.arcs.push_back({1, 2, 1, 1, 0});   // b2
  return n;
}

// Direct s->t arc plus the negative cycle s->x->s.
inline Network fix3() {
  Network n;
  n.node_count = 3;
  n.source = 0;
  n.sink = 1;
  n.arcs.push_back({0, 1, 1, 1, 0});   // s->t
  n.arcs.push_back({0, 2, 1, 1, 2});   // s->x
  n.arcs.push_back({2, 0, 1, 1, -5});  // x->s
  return n;
}

// Brute-force minimum-cut membership: enumerate all source/sink
// bipartitions, collect the arcs crossing any bipartition of minimum
// capacity. Test oracle only.
inline std::vector<char> brute_force_cut_arcs(const Network& net) {
  int n = net.node_count;
  std::vector<char> in_cut(net.arcs.size(), 0);
  std::vector<int> others;
  for (NodeId v = 0; v < n; ++v)
    if (v != net.source && v != net.sink) others.push_back(v);
  Cap best = kInfCap;
  for (std::uint64_t bits = 0; bits < (1ull << others.size()); ++bits) {
    std::vector<char> side(static_cast<size_t>(n), 0);  // 1 = source side
    side[static_cast<size_t>(net.source)] = 1;
    for (size_t i = 0; i < others.size(); ++i)
      if (bits & (1ull << i)) side[static_cast<size_t>(others[i])] = 1;
    Cap cap = 0;
    for (const Arc& a : net.arcs)
      if (side[static_cast<size_t>(a.tail)] && !side[static_cast<size_t>(a.head)]) {
        if (is_infinite(a.capacity)) {
          cap = kInfCap;
          break;
        }
        cap += a.capacity;
      }
    if (cap < best) {
      best = cap;
      std::fill(in_cut.begin(), in_cut.end(), 0);
    }
    if (cap == best && !is_infinite(cap)) {
      for (size_t i = 0; i < net.arcs.size(); ++i) {
        const Arc& a = net.arcs[i];
        if (side[static_cast<size_t>(a.tail)] && !side[static_cast<size_t>(a.head)])
          in_cut[i] = 1;
      }
    }
  }
  return in_cut;
}

// Enumerates all simple cycles of a residual graph (min-node-id canonical
// start). Returns arc-id lists. Intended for small graphs only.
inline std::vector<std::vector<int>> enumerate_simple_cycles(const ResidualGraph& rv,
                                                             std::size_t cap = 2000000) {
  std::vector<std::vector<int>> cycles;
  int n = rv.node_count;
  std::vector<std::vector<int>> out(static_cast<size_t>(n));
  for (int r = 0; r < rv.arc_count(); ++r)
    out[static_cast<size_t>(rv.arc(r).tail)].push_back(r);
  std::vector<char> visited(static_cast<size_t>(n), 0);
  std::vector<int> path;
  std::size_t steps = 0;
  for (NodeId v0 = 0; v0 < n; ++v0) {
    auto dfs = [&](auto&& self, NodeId at) -> void {
      if (++steps > cap) return;
      for (int r : out[static_cast<size_t>(at)]) {
        NodeId to = rv.arc(r).head;
        if (to == v0) {
          path.push_back(r);
          cycles.push_back(path);
          path.pop_back();
          continue;
        }
        if (to < v0 || visited[static_cast<size_t>(to)]) continue;
        visited[static_cast<size_t>(to)] = 1;
        path.push_back(r);
        self(self, to);
        path.pop_back();
        visited[static_cast<size_t>(to)] = 0;
      }
    };
    visited[static_cast<size_t>(v0)] = 1;
    dfs(dfs, v0);
    visited[static_cast<size_t>(v0)] = 0;
  }
  return cycles;
}

// Random walk in a residual graph starting anywhere; length bounded.
inline Walk random_walk(const ResidualGraph& rv, std::mt19937_64& rng, int max_len) {
  auto out = rv.out_arcs();
  std::vector<NodeId> starts;
  for (NodeId v = 0; v < rv.node_count; ++v)
    if (!out[static_cast<size_t>(v)].empty()) starts.push_back(v);
  Walk w;
  if (starts.empty()) return w;
  NodeId at = starts[rng() % starts.size()];
  w.nodes.push_back(at);
  int len = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_len));
  for (int i = 0; i < len; ++i) {
    const auto& options = out[static_cast<size_t>(at)];
    if (options.empty()) break;
    int r = options[rng() % options.size()];
    w.arcs.push_back(r);
    at = rv.arc(r).head;
    w.nodes.push_back(at);
  }
  return w;
}

}  // namespace fot::testing
