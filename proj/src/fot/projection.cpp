#include "fot/projection.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace fot {

namespace {

HeightProfile profile_from(const std::vector<Transit>& at, const std::vector<char>& real) {
  HeightProfile p;
  p.at_node = at;
  bool first = true;
  for (size_t i = 0; i < at.size(); ++i) {
    if (!real[i]) continue;
    if (first || at[i] < p.low) {
      if (first || at[i] < p.low) p.low_index = static_cast<int>(i);
      p.low = first ? at[i] : std::min(p.low, at[i]);
    }
    if (first || at[i] > p.high) {
      p.high_index = static_cast<int>(i);
      p.high = first ? at[i] : std::max(p.high, at[i]);
    }
    first = false;
  }
  require(!first, ErrorKind::MalformedWalk, "walk has no height-bearing nodes");
  p.span = p.high - p.low;
  return p;
}

}  // namespace

HeightProfile base_heights(const ResidualGraph& rv, const Walk& w) {
  validate_walk(w, arc_ends(rv));
  std::vector<Transit> at(w.nodes.size(), 0);
  for (size_t i = 0; i < w.arcs.size(); ++i)
    at[i + 1] = at[i] + rv.arc(w.arcs[i]).transit;
  return profile_from(at, std::vector<char>(w.nodes.size(), 1));
}

HeightProfile ten_heights(const TimeExpandedNetwork& ten, const Walk& w) {
  std::vector<Transit> at(w.nodes.size(), 0);
  std::vector<char> real(w.nodes.size(), 0);
  for (size_t i = 0; i < w.nodes.size(); ++i) {
    if (ten.is_super(w.nodes[i])) continue;
    at[i] = ten.layer_of(w.nodes[i]);
    real[i] = 1;
  }
  return profile_from(at, real);
}

int lowest_layer(const TimeExpandedNetwork& ten, const Walk& w) {
  return static_cast<int>(ten_heights(ten, w).low);
}

Walk project_walk(const TimeExpandedNetwork& ten, const ResidualGraph& ten_rv,
                  const ResidualGraph& base_rv, const Walk& w,
                  const RepeatedInterval* inside) {
  validate_walk(w, arc_ends(ten_rv));
  auto map_node = [&](NodeId v) -> NodeId {
    if (v == ten.super_source()) return ten.base_source;
    if (v == ten.super_sink()) return ten.base_sink;
    if (inside) {
      int layer = ten.layer_of(v);
      require(inside->contains(layer), ErrorKind::OutsideBand,
              "walk leaves the certified band");
    }
    return ten.base_node(v);
  };

  Walk out;
  out.nodes.push_back(map_node(w.nodes.front()));
  for (size_t i = 0; i < w.arcs.size(); ++i) {
    const ResidualArc& ra = ten_rv.arc(w.arcs[i]);
    const auto& inf = ten.info[static_cast<size_t>(ra.base)];
    NodeId to = map_node(w.nodes[i + 1]);
    if (inf.kind != TimeExpandedNetwork::ArcKind::Copy) {
      require(to == out.nodes.back(), ErrorKind::InternalInvariant,
              "super arc projects onto two distinct nodes");
      continue;  // super arcs vanish under the projection
    }
    int base_res = base_rv.find(inf.base, ra.backward);
    require(base_res >= 0, ErrorKind::InternalInvariant,
            "projected arc is not residual in the base network");
    out.arcs.push_back(base_res);
    out.nodes.push_back(to);
  }
  validate_walk(out, arc_ends(base_rv));
  return out;
}

Walk lift_walk(const ResidualGraph& base_rv, const ResidualGraph& ten_rv,
               const TimeExpandedNetwork& ten, const Walk& w, int layer,
               const RepeatedInterval& iv) {
  validate_walk(w, arc_ends(base_rv));
  HeightProfile heights = base_heights(base_rv, w);
  require(layer >= iv.theta1 && layer + heights.span <= iv.theta2, ErrorKind::BandOverflow,
          "lift target layer outside the certified band");

  Transit t1 = layer - heights.low;  // lowest point pinned at `layer`
  Walk out;
  out.nodes.push_back(ten.node_at(w.nodes.front(), static_cast<int>(t1)));
  Transit current = t1;
  for (size_t i = 0; i < w.arcs.size(); ++i) {
    const ResidualArc& ra = base_rv.arc(w.arcs[i]);
    Transit next = current + ra.transit;
    int copy_layer = static_cast<int>(ra.backward ? next : current);
    ArcId copy = ten.copy_arc(ra.base, copy_layer);
    require(copy >= 0, ErrorKind::BandOverflow, "no arc copy at layer " +
            std::to_string(copy_layer));
    int res = ten_rv.find(copy, ra.backward);
    require(res >= 0, ErrorKind::InternalInvariant,
            "lifted arc is not residual inside the repeated band");
    out.arcs.push_back(res);
    out.nodes.push_back(ten.node_at(w.nodes[i + 1], static_cast<int>(next)));
    current = next;
  }
  validate_walk(out, arc_ends(ten_rv));
  return out;
}

std::vector<RepeatedComponent> repeated_components(const TimeExpandedNetwork& ten,
                                                   const ResidualGraph& ten_rv, const Walk& cycle,
                                                   const RepeatedInterval& iv) {
  validate_walk(cycle, arc_ends(ten_rv));
  require(cycle.closed(), ErrorKind::MalformedWalk, "repeated components need a closed walk");

  const size_t n = cycle.arcs.size();
  auto node_at = [&](size_t i) { return cycle.nodes[i % n]; };
  auto arc_at = [&](size_t i) { return cycle.arcs[i % n]; };
  auto is_mark = [&](NodeId v) {
    if (ten.is_super(v)) return false;
    int layer = ten.layer_of(v);
    return layer == iv.theta1 || layer == iv.theta2;
  };

  std::vector<RepeatedComponent> out;
  auto classify = [&](NodeId v) {
    int layer = ten.layer_of(v);
    if (layer == iv.theta1) return RepeatedComponent::Endpoint::LayerLow;
    if (layer == iv.theta2) return RepeatedComponent::Endpoint::LayerHigh;
    return RepeatedComponent::Endpoint::WalkEnd;
  };
  // Emit positions [from, to] of the circular walk as one component when it
  // stays inside the band.
  auto emit = [&](size_t from, size_t to) {
    if (to <= from) return;
    RepeatedComponent comp;
    for (size_t i = from; i <= to; ++i) {
      NodeId v = node_at(i);
      if (ten.is_super(v) || ten.layer_of(v) < iv.theta1 || ten.layer_of(v) > iv.theta2)
        return;  // touches a super node or leaves the band
      comp.walk.nodes.push_back(v);
      if (i < to) comp.walk.arcs.push_back(arc_at(i));
    }
    comp.starts = classify(comp.walk.nodes.front());
    comp.ends = classify(comp.walk.nodes.back());
    out.push_back(std::move(comp));
  };

  // Cut positions: every super-node visit and every intersection with layer
  // theta1/theta2. Components run between consecutive cuts (circularly);
  // pieces adjacent to a super visit start right after / end right before it.
  std::vector<size_t> cuts;
  for (size_t i = 0; i < n; ++i)
    if (ten.is_super(node_at(i)) || is_mark(node_at(i))) cuts.push_back(i);

  if (cuts.empty()) {
    // The whole cycle lies strictly between the boundary layers.
    RepeatedComponent comp;
    for (NodeId v : cycle.nodes)
      if (ten.layer_of(v) < iv.theta1 || ten.layer_of(v) > iv.theta2) return out;
    comp.walk = cycle;
    comp.starts = RepeatedComponent::Endpoint::WalkEnd;
    comp.ends = RepeatedComponent::Endpoint::WalkEnd;
    out.push_back(std::move(comp));
    return out;
  }

  for (size_t c = 0; c < cuts.size(); ++c) {
    size_t from = cuts[c];
    size_t to = c + 1 < cuts.size() ? cuts[c + 1] : cuts[0] + n;
    if (ten.is_super(node_at(from))) ++from;  // super visits are not endpoints
    if (ten.is_super(node_at(to))) --to;
    emit(from, to);
  }
  return out;
}

std::vector<Walk> lift_zero_cycle_family(const ResidualGraph& base_rv,
                                         const ResidualGraph& ten_rv,
                                         const TimeExpandedNetwork& ten, const Walk& cycle,
                                         const RepeatedInterval& iv) {
  validate_walk(cycle, arc_ends(base_rv));
  require(cycle.closed(), ErrorKind::MalformedWalk, "family lift needs a cycle");
  require(cycle_transit(base_rv, cycle.arcs) == 0, ErrorKind::MalformedWalk,
          "zero-transit family lift needs a zero-transit cycle");
  HeightProfile heights = base_heights(base_rv, cycle);
  require(iv.theta1 + heights.span <= iv.theta2, ErrorKind::IntervalTooSmall,
          "certified interval cannot host a single lift");

  std::vector<Walk> family;
  for (int layer = iv.theta1; layer + heights.span <= iv.theta2; ++layer) {
    try {
      family.push_back(lift_walk(base_rv, ten_rv, ten, cycle, layer, iv));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::BandOverflow) break;  // ran over the horizon's last copy
      throw;
    }
  }
  require(!family.empty(), ErrorKind::IntervalTooSmall, "no admissible lift layer");

  std::set<NodeId> seen;
  for (const Walk& w : family)
    for (size_t i = 0; i + 1 < w.nodes.size(); ++i)
      require(seen.insert(w.nodes[i]).second, ErrorKind::InternalInvariant,
              "lifted family is not node-disjoint");
  return family;
}

std::int64_t winding_count(int theta2, int theta_start, Transit tau_p1, Transit hplus_p2,
                           Transit cycle_height) {
  require(cycle_height > 0, ErrorKind::BadRange, "winding needs positive cycle height");
  std::int64_t num = static_cast<std::int64_t>(theta2) - theta_start - tau_p1 - hplus_p2;
  std::int64_t q = num / cycle_height;
  if (num < 0 && num % cycle_height != 0) --q;  // floor division
  return q - 1;
}

namespace {

Walk concat_walks(const Walk& a, const Walk& b) {
  if (a.arcs.empty()) return b;
  if (b.arcs.empty()) return a;
  require(a.nodes.back() == b.nodes.front(), ErrorKind::MalformedWalk,
          "concatenation endpoints differ");
  Walk out = a;
  out.nodes.insert(out.nodes.end(), b.nodes.begin() + 1, b.nodes.end());
  out.arcs.insert(out.arcs.end(), b.arcs.begin(), b.arcs.end());
  return out;
}

Walk rotate_cycle_to(const Walk& cycle, NodeId start) {
  require(cycle.closed(), ErrorKind::MalformedWalk, "rotation needs a closed walk");
  size_t n = cycle.arcs.size();
  size_t at = n;
  for (size_t i = 0; i < n; ++i)
    if (cycle.nodes[i] == start) {
      at = i;
      break;
    }
  require(at < n, ErrorKind::MalformedWalk, "rotation start not on the cycle");
  Walk out;
  for (size_t i = 0; i <= n; ++i) out.nodes.push_back(cycle.nodes[(at + i) % n]);
  out.nodes[n] = out.nodes[0];
  for (size_t i = 0; i < n; ++i) out.arcs.push_back(cycle.arcs[(at + i) % n]);
  return out;
}

}  // namespace

ReachableFamily lift_reachable_cycle_family(const ResidualGraph& base_rv,
                                            const ResidualGraph& ten_rv,
                                            const TimeExpandedNetwork& ten, const Walk& cycle,
                                            const Walk& into_cycle, const Walk& out_of_cycle,
                                            const RepeatedInterval& iv, bool source_side,
                                            std::int64_t min_winding) {
  validate_walk(cycle, arc_ends(base_rv));
  require(cycle.closed(), ErrorKind::MalformedWalk, "family lift needs a cycle");
  Transit tau_b = cycle_transit(base_rv, cycle.arcs);
  require(tau_b != 0, ErrorKind::MalformedWalk, "reachable family needs nonzero transit");

  NodeId side = source_side ? base_rv.net->source : base_rv.net->sink;
  NodeId anchor = into_cycle.arcs.empty() ? into_cycle.nodes.front() : into_cycle.nodes.back();
  require(into_cycle.nodes.front() == side && out_of_cycle.nodes.back() == side,
          ErrorKind::ConnectorsMissing, "connector paths must start and end at the terminal");
  require(out_of_cycle.nodes.front() == anchor, ErrorKind::ConnectorsMissing,
          "connector paths must meet at the cycle");
  Walk rotated = rotate_cycle_to(cycle, anchor);

  HeightProfile hp1 = base_heights(base_rv, into_cycle);
  HeightProfile hp2 = base_heights(base_rv, out_of_cycle);
  HeightProfile hb = base_heights(base_rv, rotated);
  Transit tau_p1 = cycle_transit(base_rv, into_cycle.arcs);
  Transit tau_p2 = cycle_transit(base_rv, out_of_cycle.arcs);

  std::int64_t r;
  if (tau_b > 0) {
    int theta_start = iv.theta1 + static_cast<int>(-hp1.low);
    r = winding_count(iv.theta2, theta_start, tau_p1, hp2.high, hb.span);
  } else {
    // Mirror of the ascending case under time reversal (connectors swap).
    int theta_start = iv.theta1 + static_cast<int>(-(hp2.low - tau_p2));
    r = winding_count(iv.theta2, theta_start, -tau_p2, hp1.high - tau_p1, hb.span);
  }

  int copies = static_cast<int>(tau_b < 0 ? -tau_b : tau_b);
  auto build_walk = [&](std::int64_t reps) {
    Walk w = into_cycle;
    for (std::int64_t i = 0; i < reps; ++i) w = concat_walks(w, rotated);
    w = concat_walks(w, out_of_cycle);
    return w;
  };
  // The formula is exact for monotone cycles; clamp to the band numerically.
  while (r >= 1) {
    HeightProfile hw = base_heights(base_rv, build_walk(r));
    if (hw.span + copies - 1 <= iv.theta2 - iv.theta1) break;
    --r;
  }
  require(r >= 1, ErrorKind::IntervalTooSmall,
          "interval cannot host the winding the lifting needs");
  // Windings beyond min_winding guarantee negativity outright; otherwise the
  // family cost is checked directly.
  if (r <= min_winding) {
    Cost family_cost = checked_add(
        checked_add(cycle_cost(base_rv, into_cycle.arcs), cycle_cost(base_rv, out_of_cycle.arcs)),
        checked_mul(r, cycle_cost(base_rv, rotated.arcs)));
    require(family_cost < 0, ErrorKind::IntervalTooSmall,
            "winding too small for a negative family");
  }

  Walk closed_walk = build_walk(r);
  ReachableFamily family;
  family.closed_walk = closed_walk;
  family.winding = r;
  family.copies = copies;

  for (int i = 0; i < copies; ++i) {
    Walk lifted = lift_walk(base_rv, ten_rv, ten, closed_walk, iv.theta1 + i, iv);
    int first_layer = ten.layer_of(lifted.nodes.front());
    int last_layer = ten.layer_of(lifted.nodes.back());

    // Close through the super node; the re-entry super arc must carry flow.
    auto super_arc_at = [&](TimeExpandedNetwork::ArcKind kind, int layer) -> ArcId {
      for (ArcId a = 0; a < ten.net.arc_count(); ++a) {
        const auto& inf = ten.info[static_cast<size_t>(a)];
        if (inf.kind == kind && inf.layer == layer) return a;
      }
      return -1;
    };
    int res_in, res_out;
    if (source_side) {
      ArcId start_arc =
          super_arc_at(TimeExpandedNetwork::ArcKind::FromSuperSource, first_layer);
      ArcId end_arc = super_arc_at(TimeExpandedNetwork::ArcKind::IntoSuperSource, last_layer);
      res_in = ten_rv.find(start_arc, false);  // super source -> s^first
      res_out = ten_rv.find(end_arc, false);   // s^last -> super source
    } else {
      ArcId start_arc = super_arc_at(TimeExpandedNetwork::ArcKind::FromSuperSink, first_layer);
      ArcId end_arc = super_arc_at(TimeExpandedNetwork::ArcKind::ToSuperSink, last_layer);
      res_in = ten_rv.find(start_arc, false);  // super sink -> t^first
      res_out = ten_rv.find(end_arc, false);   // t^last -> super sink
    }
    require(res_in >= 0 && res_out >= 0, ErrorKind::ConnectorsMissing,
            "no residual super arc to close the lifted family");

    Walk closed;
    NodeId super_node = source_side ? ten.super_source() : ten.super_sink();
    closed.nodes.push_back(super_node);
    closed.arcs.push_back(res_in);
    closed.nodes.insert(closed.nodes.end(), lifted.nodes.begin(), lifted.nodes.end());
    closed.arcs.insert(closed.arcs.end(), lifted.arcs.begin(), lifted.arcs.end());
    closed.arcs.push_back(res_out);
    closed.nodes.push_back(super_node);
    validate_walk(closed, arc_ends(ten_rv));
    require(closed.closed(), ErrorKind::InternalInvariant, "family lift did not close");
    family.cycles.push_back(std::move(closed));
  }

  // Augmenting the family one unit each must be feasible: no residual arc
  // may be used more often than its capacity.
  std::map<int, Cap> used;
  for (const Walk& w : family.cycles)
    for (int r_id : w.arcs) used[r_id] += 1;
  for (const auto& [r_id, count] : used) {
    Cap cap = ten_rv.arc(r_id).capacity;
    require(is_infinite(cap) || count <= cap, ErrorKind::InternalInvariant,
            "lifted family overloads a residual arc");
  }
  return family;
}

}  // namespace fot
