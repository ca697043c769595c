#include "fot/network.hpp"

#include <algorithm>

namespace fot {

void Network::validate() const {
  require(node_count >= 2, ErrorKind::Parse, "network needs at least two nodes");
  require(source >= 0 && source < node_count, ErrorKind::Parse, "source out of range");
  require(sink >= 0 && sink < node_count, ErrorKind::Parse, "sink out of range");
  require(source != sink, ErrorKind::Parse, "source equals sink");
  for (const Arc& a : arcs) {
    require(a.tail >= 0 && a.tail < node_count && a.head >= 0 && a.head < node_count,
            ErrorKind::Parse, "arc endpoint out of range");
    require(a.capacity >= 0, ErrorKind::Parse, "negative capacity");
    require(a.transit >= 0, ErrorKind::Parse, "negative transit time");
  }
}

Transit Network::total_transit() const {
  Transit s = 0;
  for (const Arc& a : arcs) s = checked_add(s, a.transit);
  return s;
}

Cost Network::total_cost_capacity() const {
  Cost s = 0;
  for (const Arc& a : arcs) {
    if (is_infinite(a.capacity)) continue;
    s = checked_add(s, checked_mul(a.cost < 0 ? -a.cost : a.cost, a.capacity));
  }
  return s;
}

std::vector<std::vector<ArcId>> Network::out_arcs() const {
  std::vector<std::vector<ArcId>> out(static_cast<size_t>(node_count));
  for (ArcId a = 0; a < arc_count(); ++a) out[static_cast<size_t>(arcs[a].tail)].push_back(a);
  return out;
}

std::vector<std::vector<ArcId>> Network::in_arcs() const {
  std::vector<std::vector<ArcId>> in(static_cast<size_t>(node_count));
  for (ArcId a = 0; a < arc_count(); ++a) in[static_cast<size_t>(arcs[a].head)].push_back(a);
  return in;
}

StaticFlow zero_flow(const Network& net) {
  StaticFlow x;
  x.on_arc.assign(net.arcs.size(), 0);
  x.value = 0;
  return x;
}

void check_feasible(const Network& net, const StaticFlow& x) {
  require(x.on_arc.size() == net.arcs.size(), ErrorKind::InfeasibleFlow,
          "flow vector length mismatch");
  std::vector<Cap> net_out(static_cast<size_t>(net.node_count), 0);
  for (ArcId a = 0; a < net.arc_count(); ++a) {
    const Arc& arc = net.arc(a);
    Cap f = x[a];
    require(f >= 0, ErrorKind::InfeasibleFlow, "negative flow on arc " + std::to_string(a));
    require(is_infinite(arc.capacity) || f <= arc.capacity, ErrorKind::InfeasibleFlow,
            "capacity exceeded on arc " + std::to_string(a));
    net_out[static_cast<size_t>(arc.tail)] += f;
    net_out[static_cast<size_t>(arc.head)] -= f;
  }
  for (NodeId v = 0; v < net.node_count; ++v) {
    if (v == net.source || v == net.sink) continue;
    require(net_out[static_cast<size_t>(v)] == 0, ErrorKind::InfeasibleFlow,
            "conservation violated at node " + std::to_string(v));
  }
}

Cost flow_cost(const Network& net, const StaticFlow& x) {
  Cost c = 0;
  for (ArcId a = 0; a < net.arc_count(); ++a)
    c = checked_add(c, checked_mul(net.arc(a).cost, x[a]));
  return c;
}

Cap flow_value(const Network& net, const StaticFlow& x) {
  Cap v = 0;
  for (ArcId a = 0; a < net.arc_count(); ++a) {
    if (net.arc(a).tail == net.source) v += x[a];
    if (net.arc(a).head == net.source) v -= x[a];
  }
  return v;
}

bool NormalizedNetwork::is_identity() const {
  for (const auto& chain : subdivision)
    if (chain.size() != 1) return false;
  return true;
}

NormalizedNetwork normalize_transit_times(const Network& net) {
  net.validate();
  NormalizedNetwork out;
  out.original_node_count = net.node_count;
  out.base.node_count = net.node_count;
  out.base.source = net.source;
  out.base.sink = net.sink;
  out.base.node_names = net.node_names;
  out.base.node_names.resize(static_cast<size_t>(net.node_count));
  out.subdivision.resize(net.arcs.size());

  for (ArcId a = 0; a < net.arc_count(); ++a) {
    const Arc& arc = net.arc(a);
    if (arc.transit <= 1) {
      out.subdivision[static_cast<size_t>(a)].push_back(out.base.arc_count());
      out.origin_arc.push_back(a);
      out.base.arcs.push_back(arc);
      continue;
    }
    // Chain of transit-1 arcs through fresh nodes; cost rides on the first arc.
    NodeId prev = arc.tail;
    for (Transit step = 0; step < arc.transit; ++step) {
      NodeId next;
      if (step + 1 == arc.transit) {
        next = arc.head;
      } else {
        next = out.base.node_count++;
        out.base.node_names.push_back("a" + std::to_string(a) + "#" + std::to_string(step + 1));
      }
      Arc unit;
      unit.tail = prev;
      unit.head = next;
      unit.capacity = arc.capacity;
      unit.transit = 1;
      unit.cost = step == 0 ? arc.cost : 0;
      out.subdivision[static_cast<size_t>(a)].push_back(out.base.arc_count());
      out.origin_arc.push_back(a);
      out.base.arcs.push_back(unit);
      prev = next;
    }
  }
  out.base.validate();
  return out;
}

StaticFlow project_to_original(const NormalizedNetwork& norm, const StaticFlow& x,
                               int original_arc_count) {
  StaticFlow out;
  out.on_arc.assign(static_cast<size_t>(original_arc_count), 0);
  out.value = x.value;
  for (ArcId a = 0; a < original_arc_count; ++a) {
    const auto& chain = norm.subdivision[static_cast<size_t>(a)];
    require(!chain.empty(), ErrorKind::InternalInvariant, "subdivision map not total");
    out[a] = x[chain.front()];
  }
  return out;
}

}  // namespace fot
