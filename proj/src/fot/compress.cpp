#include <algorithm>
#include <map>

#include "fot/construction.hpp"

namespace fot {

namespace {

// A positive-transit repeated component anchored at a super node, with its
// position range on the circular cycle. Case EndsHigh: starts right after a
// super visit, ends at layer theta2. Case StartsLow: starts at layer theta1,
// ends right before a super visit.
struct Candidate {
  size_t from = 0;  // circular node position of the component start
  size_t to = 0;    // circular node position of the component end (from < to)
  bool ends_high = false;
};

struct Rebuilt {
  std::vector<int> arcs;  // replacement TEN residual arcs, super closure included
  bool ok = false;
};

// Insert positive-transit cycles from `avail` into the path until `goal`
// holds; insertions are positions in the evolving walk. Returns empty on
// failure.
struct InsertionResult {
  Walk walk;
  bool ok = false;
};

InsertionResult raise_endpoint(const ResidualGraph& base_rv, const Walk& path,
                               std::vector<Walk> avail, bool raise_end) {
  Walk cur = path;
  for (int rounds = 0; rounds < 4 * static_cast<int>(path.nodes.size()) + 8; ++rounds) {
    HeightProfile hp = base_heights(base_rv, cur);
    size_t k = cur.nodes.size() - 1;
    bool satisfied = true;
    size_t pivot = 0;
    if (raise_end) {
      // Endpoint must sit at the maximum height; find the last hill above it.
      for (size_t p = 0; p < k; ++p)
        if (hp.at_node[p] > hp.at_node[k]) {
          satisfied = false;
          pivot = p;
        }
    } else {
      // Start must sit at the minimum height; find the first valley below it.
      for (size_t p = k + 1; p-- > 1;)
        if (hp.at_node[p] < hp.at_node[0]) {
          satisfied = false;
          pivot = p;
        }
    }
    if (satisfied) {
      InsertionResult res;
      res.walk = cur;
      res.ok = true;
      return res;
    }

    // Positions where an insertion helps: after the last hill (raising the
    // tail of the walk) or before the first valley (raising everything past
    // the insertion point).
    size_t lo = raise_end ? pivot + 1 : 0;
    size_t hi = raise_end ? cur.nodes.size() - 1 : pivot - 1;
    int best_cycle = -1;
    size_t best_pos = 0;
    Cost best_cost = 0;
    for (size_t ci = 0; ci < avail.size(); ++ci) {
      if (avail[ci].arcs.empty()) continue;
      Transit t = cycle_transit(base_rv, avail[ci].arcs);
      if (t <= 0) continue;
      for (size_t pos = lo; pos <= hi && pos < cur.nodes.size(); ++pos) {
        bool attaches = false;
        for (NodeId v : avail[ci].nodes)
          if (v == cur.nodes[pos]) attaches = true;
        if (!attaches) continue;
        Cost c = cycle_cost(base_rv, avail[ci].arcs);
        if (best_cycle < 0 || c < best_cost || (c == best_cost && pos < best_pos)) {
          best_cycle = static_cast<int>(ci);
          best_pos = pos;
          best_cost = c;
        }
        break;  // earliest admissible position for this cycle
      }
    }
    if (best_cycle < 0) return {};

    // Splice the cycle in at the chosen position, rotated to the shared node.
    Walk rotated;
    {
      const Walk& b = avail[static_cast<size_t>(best_cycle)];
      size_t n = b.arcs.size();
      size_t s = 0;
      for (size_t i = 0; i < n; ++i)
        if (b.nodes[i] == cur.nodes[best_pos]) {
          s = i;
          break;
        }
      for (size_t i = 0; i <= n; ++i) rotated.nodes.push_back(b.nodes[(s + i) % n]);
      rotated.nodes[n] = rotated.nodes[0];
      for (size_t i = 0; i < n; ++i) rotated.arcs.push_back(b.arcs[(s + i) % n]);
    }
    Walk next;
    next.nodes.assign(cur.nodes.begin(), cur.nodes.begin() + static_cast<std::ptrdiff_t>(best_pos) + 1);
    next.arcs.assign(cur.arcs.begin(), cur.arcs.begin() + static_cast<std::ptrdiff_t>(best_pos));
    next.nodes.insert(next.nodes.end(), rotated.nodes.begin() + 1, rotated.nodes.end());
    next.arcs.insert(next.arcs.end(), rotated.arcs.begin(), rotated.arcs.end());
    next.nodes.insert(next.nodes.end(), cur.nodes.begin() + static_cast<std::ptrdiff_t>(best_pos) + 1,
                      cur.nodes.end());
    next.arcs.insert(next.arcs.end(), cur.arcs.begin() + static_cast<std::ptrdiff_t>(best_pos),
                     cur.arcs.end());
    cur = next;
    avail.erase(avail.begin() + best_cycle);
  }
  return {};
}

}  // namespace

Walk compress_cycle(const TimeExpandedNetwork& ten, const ResidualGraph& ten_rv,
                    const ResidualGraph& base_rv, const Walk& cycle,
                    const RepeatedInterval& iv, std::string* note) {
  validate_walk(cycle, arc_ends(ten_rv));
  if (!cycle.closed() || cycle.arcs.empty()) return cycle;
  const size_t n = cycle.arcs.size();
  auto node_at = [&](size_t i) { return cycle.nodes[i % n]; };

  auto in_band = [&](NodeId v) {
    return !ten.is_super(v) && iv.contains(ten.layer_of(v));
  };
  auto is_mark = [&](NodeId v) {
    if (ten.is_super(v)) return false;
    int layer = ten.layer_of(v);
    return layer == iv.theta1 || layer == iv.theta2;
  };

  // Components anchored at super visits, cut at the first boundary-layer
  // intersection per the splitting rule.
  std::vector<Candidate> candidates;
  for (size_t i = 0; i < n; ++i) {
    if (!ten.is_super(node_at(i))) continue;
    // Component starting right after this super visit.
    size_t from = i + 1;
    if (in_band(node_at(from))) {
      size_t to = from;
      while (to - from <= n && !is_mark(node_at(to)) && in_band(node_at(to + 1)) &&
             !ten.is_super(node_at(to + 1)))
        ++to;
      int start_layer = ten.layer_of(node_at(from));
      int end_layer = ten.layer_of(node_at(to));
      if (to > from && end_layer == iv.theta2 && start_layer != iv.theta1 &&
          start_layer < iv.theta2)
        candidates.push_back({from, to, true});
    }
    // Component ending right before this super visit.
    size_t to = i + n - 1;  // circular predecessor
    if (in_band(node_at(to))) {
      size_t from2 = to;
      while (to - from2 <= n && !is_mark(node_at(from2)) && in_band(node_at(from2 + n - 1)) &&
             !ten.is_super(node_at(from2 + n - 1)))
        --from2;
      int start_layer = ten.layer_of(node_at(from2));
      int end_layer = ten.layer_of(node_at(to));
      if (to > from2 && start_layer == iv.theta1 && end_layer != iv.theta2 &&
          end_layer > iv.theta1)
        candidates.push_back({from2, to, false});
    }
  }
  if (candidates.empty()) return cycle;

  std::vector<std::pair<Candidate, Rebuilt>> rebuilt;
  for (const Candidate& cand : candidates) {
    Walk comp;
    for (size_t i = cand.from; i <= cand.to; ++i) comp.nodes.push_back(node_at(i));
    for (size_t i = cand.from; i < cand.to; ++i) comp.arcs.push_back(cycle.arcs[i % n]);

    Walk projected;
    try {
      projected = project_walk(ten, ten_rv, base_rv, comp, &iv);
    } catch (const Error&) {
      continue;
    }
    if (cycle_transit(base_rv, projected.arcs) <= 0) continue;

    WalkDecomposition dec = decompose_walk(projected, arc_ends(base_rv));
    bool droppable = true;
    for (const Walk& b : dec.cycles)
      if (cycle_cost(base_rv, b.arcs) < 0) droppable = false;
    if (!droppable) continue;  // dropping would raise the cost

    // A closed projection leaves a single-node path; the component then
    // collapses onto its re-anchored endpoint.
    InsertionResult ins = raise_endpoint(base_rv, dec.path, dec.cycles, cand.ends_high);
    if (!ins.ok) continue;
    Cost new_cost = 0;
    for (int r : ins.walk.arcs) new_cost = checked_add(new_cost, base_rv.arc(r).cost);
    Cost old_cost = 0;
    for (int r : projected.arcs) old_cost = checked_add(old_cost, base_rv.arc(r).cost);
    if (new_cost > old_cost) continue;

    HeightProfile hp = base_heights(base_rv, ins.walk);
    int lift_layer;
    if (cand.ends_high) {
      // End pinned at theta2.
      lift_layer = iv.theta2 - static_cast<int>(hp.at_node.back() - hp.low);
    } else {
      // Start pinned at theta1; the start is the lowest point by now.
      if (hp.at_node.front() != hp.low) continue;
      lift_layer = iv.theta1;
    }
    if (lift_layer < iv.theta1 || lift_layer + hp.span > iv.theta2) continue;

    Walk lifted;
    try {
      lifted = lift_walk(base_rv, ten_rv, ten, ins.walk, lift_layer, iv);
    } catch (const Error&) {
      continue;
    }

    // Replace the super closure next to the component by one at the new layer.
    bool to_source;
    int closure_layer;
    int closure_res = -1;
    if (cand.ends_high) {
      NodeId super_before = node_at(cand.from - 1);
      to_source = super_before == ten.super_source();
      closure_layer = ten.layer_of(lifted.nodes.front());
      auto kind = to_source ? TimeExpandedNetwork::ArcKind::FromSuperSource
                            : TimeExpandedNetwork::ArcKind::FromSuperSink;
      for (ArcId a = 0; a < ten.net.arc_count(); ++a) {
        const auto& inf = ten.info[static_cast<size_t>(a)];
        if (inf.kind == kind && inf.layer == closure_layer) closure_res = ten_rv.find(a, false);
      }
    } else {
      NodeId super_after = node_at(cand.to + 1);
      to_source = super_after == ten.super_source();
      closure_layer = ten.layer_of(lifted.nodes.back());
      auto kind = to_source ? TimeExpandedNetwork::ArcKind::IntoSuperSource
                            : TimeExpandedNetwork::ArcKind::ToSuperSink;
      for (ArcId a = 0; a < ten.net.arc_count(); ++a) {
        const auto& inf = ten.info[static_cast<size_t>(a)];
        if (inf.kind == kind && inf.layer == closure_layer) closure_res = ten_rv.find(a, false);
      }
    }
    if (closure_res < 0) continue;

    Rebuilt rb;
    rb.ok = true;
    if (cand.ends_high) {
      rb.arcs.push_back(closure_res);
      rb.arcs.insert(rb.arcs.end(), lifted.arcs.begin(), lifted.arcs.end());
    } else {
      rb.arcs = lifted.arcs;
      rb.arcs.push_back(closure_res);
    }
    rebuilt.push_back({cand, std::move(rb)});
  }
  if (rebuilt.empty()) return cycle;

  // Assemble the rewritten cycle: walk the original positions, substituting
  // [super arc + component] (EndsHigh) or [component + super arc] (StartsLow).
  std::vector<int> arcs;
  size_t i = 0;
  while (i < n) {
    bool substituted = false;
    for (const auto& [cand, rb] : rebuilt) {
      if (cand.ends_high && (i + 1) % n == cand.from % n) {
        // position i is the super arc before the component
        arcs.insert(arcs.end(), rb.arcs.begin(), rb.arcs.end());
        i += 1 + (cand.to - cand.from);
        substituted = true;
        break;
      }
      if (!cand.ends_high && i % n == cand.from % n) {
        arcs.insert(arcs.end(), rb.arcs.begin(), rb.arcs.end());
        i += (cand.to - cand.from) + 1;
        substituted = true;
        break;
      }
    }
    if (substituted) continue;
    arcs.push_back(cycle.arcs[i % n]);
    ++i;
  }

  // The rewrite must stay a closed residual walk within capacities and must
  // not cost more.
  Walk out;
  try {
    out = walk_from_arcs(arcs, arc_ends(ten_rv));
  } catch (const Error&) {
    if (note) *note += "[compression produced a broken walk; kept original]";
    return cycle;
  }
  if (!out.closed()) {
    if (note) *note += "[compression broke closure; kept original]";
    return cycle;
  }
  std::map<int, Cap> usage;
  for (int r : out.arcs) usage[r] += 1;
  for (const auto& [r, count] : usage) {
    Cap cap = ten_rv.arc(r).capacity;
    if (!is_infinite(cap) && count > cap) {
      if (note) *note += "[compression overloads an arc; kept original]";
      return cycle;
    }
  }
  if (cycle_cost(ten_rv, out.arcs) > cycle_cost(ten_rv, cycle.arcs)) {
    if (note) *note += "[compression raised the cost; kept original]";
    return cycle;
  }
  if (note && out.arcs != cycle.arcs) *note += "[compressed]";
  return out;
}

}  // namespace fot
