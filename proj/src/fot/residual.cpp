#include "fot/residual.hpp"

#include <algorithm>

namespace fot {

std::vector<std::vector<int>> ResidualGraph::out_arcs() const {
  std::vector<std::vector<int>> out(static_cast<size_t>(node_count));
  for (int r = 0; r < arc_count(); ++r) out[static_cast<size_t>(arcs[r].tail)].push_back(r);
  return out;
}

int ResidualGraph::find(ArcId base, bool backward) const {
  for (int r = 0; r < arc_count(); ++r)
    if (arcs[r].base == base && arcs[r].backward == backward) return r;
  return -1;
}

ResidualGraph residual(const Network& net, const StaticFlow& x) {
  check_feasible(net, x);
  ResidualGraph rv;
  rv.net = &net;
  rv.node_count = net.node_count;
  for (ArcId a = 0; a < net.arc_count(); ++a) {
    const Arc& arc = net.arc(a);
    Cap forward = is_infinite(arc.capacity) ? kInfCap : arc.capacity - x[a];
    if (forward > 0) {
      rv.arcs.push_back({a, false, arc.tail, arc.head, forward, arc.cost, arc.transit});
    }
    if (x[a] > 0) {
      rv.arcs.push_back({a, true, arc.head, arc.tail, x[a], -arc.cost, -arc.transit});
    }
  }
  return rv;
}

IncidenceVector zero_incidence(int arc_count) {
  IncidenceVector h;
  h.mult.assign(static_cast<size_t>(arc_count), 0);
  return h;
}

bool IncidenceVector::empty() const {
  return std::all_of(mult.begin(), mult.end(), [](Cap m) { return m == 0; });
}

StaticFlow augment(const Network& net, const StaticFlow& x, const ResidualGraph& rv,
                   const IncidenceVector& target, Cap amount) {
  require(amount >= 0, ErrorKind::CapacityExceeded, "negative augmentation amount");
  StaticFlow out = x;
  if (amount == 0) return out;
  for (int r = 0; r < rv.arc_count(); ++r) {
    Cap m = target[r];
    if (m == 0) continue;
    require(m > 0, ErrorKind::CapacityExceeded, "negative multiplicity");
    const ResidualArc& ra = rv.arc(r);
    Cap delta = checked_mul(m, amount);
    require(is_infinite(ra.capacity) || delta <= ra.capacity, ErrorKind::CapacityExceeded,
            "residual capacity exceeded on arc " + std::to_string(ra.base));
    if (ra.backward)
      out[ra.base] -= delta;
    else
      out[ra.base] += delta;
  }
  check_feasible(net, out);
  out.value = flow_value(net, out);
  return out;
}

StaticFlow augment_cycle(const Network& net, const StaticFlow& x, const ResidualGraph& rv,
                         const std::vector<int>& cycle_arcs, Cap amount) {
  IncidenceVector target = zero_incidence(rv.arc_count());
  for (int r : cycle_arcs) target[r] += 1;
  return augment(net, x, rv, target, amount);
}

Cap cycle_capacity(const ResidualGraph& rv, const std::vector<int>& cycle_arcs) {
  Cap cap = kInfCap;
  for (int r : cycle_arcs) cap = std::min(cap, rv.arc(r).capacity);
  return cap;
}

Cost cycle_cost(const ResidualGraph& rv, const std::vector<int>& cycle_arcs) {
  Cost c = 0;
  for (int r : cycle_arcs) c = checked_add(c, rv.arc(r).cost);
  return c;
}

Transit cycle_transit(const ResidualGraph& rv, const std::vector<int>& cycle_arcs) {
  Transit t = 0;
  for (int r : cycle_arcs) t = checked_add(t, rv.arc(r).transit);
  return t;
}

UnitExpansion unit_capacity_expansion(const ResidualGraph& rv, Cap infinite_bound) {
  UnitExpansion ex;
  ex.residual = &rv;
  for (int r = 0; r < rv.arc_count(); ++r) {
    Cap copies = rv.arc(r).capacity;
    if (is_infinite(copies)) {
      require(infinite_bound > 0, ErrorKind::UnboundedExpansion,
              "infinite-capacity arc expanded without a bound");
      copies = infinite_bound;
    }
    for (Cap k = 0; k < copies; ++k) ex.origin.push_back(r);
  }
  return ex;
}

}  // namespace fot
