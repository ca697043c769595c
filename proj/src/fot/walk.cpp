#include "fot/walk.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace fot {

ArcEnds arc_ends(const Network& net) {
  return [&net](int a) {
    const Arc& arc = net.arc(a);
    return std::make_pair(arc.tail, arc.head);
  };
}

ArcEnds arc_ends(const ResidualGraph& rv) {
  return [&rv](int r) {
    const ResidualArc& ra = rv.arc(r);
    return std::make_pair(ra.tail, ra.head);
  };
}

bool Walk::simple() const {
  std::set<NodeId> seen;
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (i + 1 == nodes.size() && closed()) break;  // shared endpoint
    if (!seen.insert(nodes[i]).second) return false;
  }
  return true;
}

Walk walk_from_arcs(const std::vector<int>& arcs, const ArcEnds& ends) {
  Walk w;
  w.arcs = arcs;
  require(!arcs.empty(), ErrorKind::MalformedWalk, "cannot build a walk from no arcs");
  w.nodes.push_back(ends(arcs.front()).first);
  for (int a : arcs) {
    auto [tail, head] = ends(a);
    require(tail == w.nodes.back(), ErrorKind::MalformedWalk, "arcs do not chain");
    w.nodes.push_back(head);
  }
  return w;
}

void validate_walk(const Walk& w, const ArcEnds& ends) {
  require(!w.nodes.empty(), ErrorKind::MalformedWalk, "walk has no nodes");
  require(w.nodes.size() == w.arcs.size() + 1, ErrorKind::MalformedWalk,
          "walk node/arc counts out of step");
  for (size_t i = 0; i < w.arcs.size(); ++i) {
    auto [tail, head] = ends(w.arcs[i]);
    require(tail == w.nodes[i] && head == w.nodes[i + 1], ErrorKind::MalformedWalk,
            "incidence violation at position " + std::to_string(i));
  }
}

WalkDecomposition decompose_walk(const Walk& w, const ArcEnds& ends) {
  validate_walk(w, ends);
  WalkDecomposition out;

  std::vector<NodeId> path_nodes{w.nodes.front()};
  std::vector<int> path_arcs;
  std::map<NodeId, size_t> on_path{{w.nodes.front(), 0}};

  for (size_t i = 0; i < w.arcs.size(); ++i) {
    NodeId next = w.nodes[i + 1];
    auto hit = on_path.find(next);
    if (hit == on_path.end()) {
      path_arcs.push_back(w.arcs[i]);
      path_nodes.push_back(next);
      on_path.emplace(next, path_nodes.size() - 1);
      continue;
    }
    // First revisit: everything since the previous occurrence closes a cycle.
    size_t at = hit->second;
    Walk cycle;
    cycle.nodes.assign(path_nodes.begin() + static_cast<std::ptrdiff_t>(at), path_nodes.end());
    cycle.nodes.push_back(next);
    cycle.arcs.assign(path_arcs.begin() + static_cast<std::ptrdiff_t>(at), path_arcs.end());
    cycle.arcs.push_back(w.arcs[i]);
    out.cycles.push_back(std::move(cycle));
    for (size_t j = at + 1; j < path_nodes.size(); ++j) on_path.erase(path_nodes[j]);
    path_nodes.resize(at + 1);
    path_arcs.resize(at);
  }

  out.path.nodes = std::move(path_nodes);
  out.path.arcs = std::move(path_arcs);
  return out;
}

std::vector<std::vector<int>> decompose_eulerian(const IncidenceVector& h, int node_count,
                                                 const ArcEnds& ends) {
  std::vector<Cap> remaining = h.mult;
  std::vector<Cap> balance(static_cast<size_t>(node_count), 0);
  std::vector<std::vector<int>> out_of(static_cast<size_t>(node_count));
  for (size_t a = 0; a < remaining.size(); ++a) {
    if (remaining[a] == 0) continue;
    require(remaining[a] > 0, ErrorKind::NotEulerian, "negative multiplicity");
    auto [tail, head] = ends(static_cast<int>(a));
    balance[static_cast<size_t>(tail)] += remaining[a];
    balance[static_cast<size_t>(head)] -= remaining[a];
    out_of[static_cast<size_t>(tail)].push_back(static_cast<int>(a));
  }
  for (NodeId v = 0; v < node_count; ++v)
    require(balance[static_cast<size_t>(v)] == 0, ErrorKind::NotEulerian,
            "degree imbalance at node " + std::to_string(v));
  for (auto& lst : out_of) std::sort(lst.begin(), lst.end());

  std::vector<std::vector<int>> cycles;
  for (NodeId start = 0; start < node_count; ++start) {
    while (true) {
      auto next_unused = [&](NodeId v) -> int {
        for (int a : out_of[static_cast<size_t>(v)])
          if (remaining[static_cast<size_t>(a)] > 0) return a;
        return -1;
      };
      if (next_unused(start) < 0) break;

      // Follow unused arcs until we are stuck; degree balance guarantees the
      // trail closes at `start`. The closed trail then splits into cycles.
      std::vector<int> trail;
      NodeId at = start;
      while (true) {
        int a = next_unused(at);
        if (a < 0) break;
        remaining[static_cast<size_t>(a)] -= 1;
        trail.push_back(a);
        at = ends(a).second;
      }
      require(at == start && !trail.empty(), ErrorKind::NotEulerian,
              "trail did not close; multiset is not Eulerian");
      Walk closed = walk_from_arcs(trail, ends);
      WalkDecomposition dec = decompose_walk(closed, ends);
      require(dec.path.arcs.empty(), ErrorKind::InternalInvariant,
              "closed trail decomposed with a leftover path");
      for (Walk& c : dec.cycles) cycles.push_back(std::move(c.arcs));
    }
  }
  return cycles;
}

}  // namespace fot
