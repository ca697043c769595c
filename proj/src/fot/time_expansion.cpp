#include "fot/time_expansion.hpp"

#include <algorithm>

namespace fot {

TimeExpandedNetwork build_time_expanded(const NormalizedNetwork& norm, int horizon) {
  require(horizon >= 2, ErrorKind::HorizonTooSmall, "time horizon must be at least 2");
  const Network& base = norm.base;
  for (const Arc& a : base.arcs)
    require(a.transit == 0 || a.transit == 1, ErrorKind::Parse,
            "time expansion requires a normalized network");

  TimeExpandedNetwork ten;
  ten.horizon = horizon;
  ten.base_node_count = base.node_count;
  ten.base_arc_count = base.arc_count();
  ten.base_source = base.source;
  ten.base_sink = base.sink;
  ten.net.node_count = 2 + horizon * base.node_count;
  ten.net.source = 0;  // super source
  ten.net.sink = 1;    // super sink
  ten.copy_of.assign(static_cast<size_t>(base.arc_count()),
                     std::vector<ArcId>(static_cast<size_t>(horizon), -1));

  for (int layer = 1; layer <= horizon - 1; ++layer) {
    for (ArcId a = 0; a < base.arc_count(); ++a) {
      const Arc& arc = base.arc(a);
      if (layer + arc.transit > horizon) continue;
      Arc copy;
      copy.tail = ten.node_at(arc.tail, layer);
      copy.head = ten.node_at(arc.head, layer + static_cast<int>(arc.transit));
      copy.capacity = arc.capacity;
      copy.cost = arc.cost;
      copy.transit = arc.transit;
      ten.copy_of[static_cast<size_t>(a)][static_cast<size_t>(layer - 1)] = ten.net.arc_count();
      ten.info.push_back({TimeExpandedNetwork::ArcKind::Copy, a, layer});
      ten.net.arcs.push_back(copy);
    }
  }
  for (int layer = 1; layer <= horizon; ++layer) {
    ten.info.push_back({TimeExpandedNetwork::ArcKind::FromSuperSource, -1, layer});
    ten.net.arcs.push_back({ten.net.source, ten.node_at(base.source, layer), kInfCap, 0, 0});
  }
  for (int layer = 1; layer <= horizon; ++layer) {
    ten.info.push_back({TimeExpandedNetwork::ArcKind::IntoSuperSource, -1, layer});
    ten.net.arcs.push_back({ten.node_at(base.source, layer), ten.net.source, kInfCap, 0, 0});
  }
  for (int layer = 1; layer <= horizon; ++layer) {
    ten.info.push_back({TimeExpandedNetwork::ArcKind::ToSuperSink, -1, layer});
    ten.net.arcs.push_back({ten.node_at(base.sink, layer), ten.net.sink, kInfCap, 0, 0});
  }
  for (int layer = 1; layer <= horizon; ++layer) {
    ten.info.push_back({TimeExpandedNetwork::ArcKind::FromSuperSink, -1, layer});
    ten.net.arcs.push_back({ten.net.sink, ten.node_at(base.sink, layer), kInfCap, 0, 0});
  }
  ten.net.validate();
  return ten;
}

Cap flow_value(const FlowOverTime& f) {
  return flow_value(f.ten->net, f.flow);
}

Cost flow_cost(const FlowOverTime& f) {
  return flow_cost(f.ten->net, f.flow);
}

Cap layer_value(const FlowOverTime& f, ArcId base_arc, int layer) {
  if (layer < 1 || layer > f.ten->horizon) return 0;
  ArcId copy = f.ten->copy_arc(base_arc, layer);
  return copy < 0 ? 0 : f.flow[copy];
}

std::vector<RepeatedInterval> check_repeated(const FlowOverTime& f) {
  const TimeExpandedNetwork& ten = *f.ten;
  const int horizon = ten.horizon;
  std::vector<char> eq(static_cast<size_t>(horizon), 0);  // eq[t] for t in 1..horizon-1
  for (int t = 1; t <= horizon - 1; ++t) {
    bool same = true;
    for (ArcId a = 0; a < ten.base_arc_count && same; ++a)
      same = layer_value(f, a, t) == layer_value(f, a, t + 1);
    eq[static_cast<size_t>(t)] = same;
  }
  std::vector<RepeatedInterval> out;
  int t = 1;
  while (t <= horizon - 1) {
    if (!eq[static_cast<size_t>(t)]) {
      ++t;
      continue;
    }
    int start = t;
    while (t <= horizon - 1 && eq[static_cast<size_t>(t)]) ++t;
    int end = t;  // interval [start, end] with end-start >= 1
    if (end - start >= 2) {
      RepeatedInterval iv;
      iv.theta1 = start;
      iv.theta2 = end;
      iv.pattern.resize(static_cast<size_t>(ten.base_arc_count));
      for (ArcId a = 0; a < ten.base_arc_count; ++a)
        iv.pattern[static_cast<size_t>(a)] = layer_value(f, a, start);
      out.push_back(std::move(iv));
    }
  }
  return out;
}

bool interval_still_repeated(const FlowOverTime& f, const RepeatedInterval& iv) {
  if (iv.theta1 < 1 || iv.theta2 > f.ten->horizon || iv.theta2 - iv.theta1 < 2) return false;
  for (int t = iv.theta1; t <= iv.theta2 - 1; ++t)
    for (ArcId a = 0; a < f.ten->base_arc_count; ++a)
      if (layer_value(f, a, t) != layer_value(f, a, t + 1)) return false;
  for (ArcId a = 0; a < f.ten->base_arc_count; ++a)
    if (layer_value(f, a, iv.theta1) != iv.pattern[static_cast<size_t>(a)]) return false;
  return true;
}

StaticFlow phi_project(const FlowOverTime& f, const RepeatedInterval& iv, const Network& base) {
  require(interval_still_repeated(f, iv), ErrorKind::NotRepeated,
          "interval certificate is stale");
  StaticFlow x;
  x.on_arc.resize(static_cast<size_t>(base.arc_count()));
  for (ArcId a = 0; a < base.arc_count(); ++a)
    x[a] = layer_value(f, a, iv.theta1);
  x.value = flow_value(base, x);
  check_feasible(base, x);
  return x;
}

BandView band(const TimeExpandedNetwork& ten, int lo, int hi) {
  require(1 <= lo && lo <= hi && hi <= ten.horizon, ErrorKind::BadRange,
          "band layers out of range");
  BandView view;
  view.ten = &ten;
  view.lo = lo;
  view.hi = hi;
  view.arc_mask.assign(ten.net.arcs.size(), 0);
  for (ArcId a = 0; a < ten.net.arc_count(); ++a) {
    const auto& inf = ten.info[static_cast<size_t>(a)];
    bool inside = false;
    if (inf.kind == TimeExpandedNetwork::ArcKind::Copy) {
      int head_layer = inf.layer + static_cast<int>(ten.net.arc(a).transit);
      inside = inf.layer >= lo && head_layer <= hi;
    } else {
      inside = inf.layer >= lo && inf.layer <= hi;
    }
    if (inside) {
      view.arc_mask[static_cast<size_t>(a)] = 1;
      view.arcs.push_back(a);
    }
  }
  return view;
}

std::vector<char> band_residual_mask(const TimeExpandedNetwork& ten, const ResidualGraph& rv,
                                     int lo, int hi) {
  BandView view = band(ten, lo, hi);
  std::vector<char> mask(static_cast<size_t>(rv.arc_count()), 0);
  for (int r = 0; r < rv.arc_count(); ++r)
    mask[static_cast<size_t>(r)] = view.arc_mask[static_cast<size_t>(rv.arc(r).base)];
  return mask;
}

}  // namespace fot
