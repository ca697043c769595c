#include "fot/io.hpp"

#include <deque>
#include <fstream>
#include <random>
#include <sstream>

namespace fot {

namespace {

[[noreturn]] void parse_fail(int line, const std::string& msg) {
  raise(ErrorKind::Parse, "line " + std::to_string(line) + ": " + msg);
}

}  // namespace

Instance parse_instance(std::istream& in) {
  Instance inst;
  bool have_header = false;
  bool have_source = false, have_sink = false;
  int declared_nodes = 0, declared_arcs = 0;
  int line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "c") continue;
    if (tag == "p") {
      std::string kind;
      if (!(ls >> kind >> declared_nodes >> declared_arcs >> inst.horizon) || kind != "fot")
        parse_fail(line_no, "expected 'p fot <nodes> <arcs> <theta>'");
      if (declared_nodes < 2) parse_fail(line_no, "instance needs at least two nodes");
      if (declared_arcs < 0 || inst.horizon < 1) parse_fail(line_no, "bad problem line");
      have_header = true;
      inst.net.node_count = declared_nodes;
      continue;
    }
    if (!have_header) parse_fail(line_no, "problem line must come first");
    if (tag == "n") {
      int id;
      std::string role;
      if (!(ls >> id >> role)) parse_fail(line_no, "expected 'n <id> s|t'");
      if (id < 1 || id > declared_nodes) parse_fail(line_no, "node id out of range");
      if (role == "s") {
        if (have_source) parse_fail(line_no, "duplicate source line");
        inst.net.source = id - 1;
        have_source = true;
      } else if (role == "t") {
        if (have_sink) parse_fail(line_no, "duplicate sink line");
        inst.net.sink = id - 1;
        have_sink = true;
      } else {
        parse_fail(line_no, "node role must be 's' or 't'");
      }
      continue;
    }
    if (tag == "a") {
      int tail, head;
      Cap u;
      Cost c;
      Transit t;
      if (!(ls >> tail >> head >> u >> c >> t))
        parse_fail(line_no, "expected 'a <tail> <head> <capacity> <cost> <transit>'");
      if (tail < 1 || tail > declared_nodes || head < 1 || head > declared_nodes)
        parse_fail(line_no, "arc endpoint out of range");
      if (u < 0) parse_fail(line_no, "capacity must be nonnegative");
      if (t < 0) parse_fail(line_no, "transit time must be nonnegative");
      inst.net.arcs.push_back({tail - 1, head - 1, u, t, c});
      continue;
    }
    parse_fail(line_no, "unknown line tag '" + tag + "'");
  }
  if (!have_header) parse_fail(line_no, "missing problem line");
  if (!have_source) parse_fail(line_no, "missing source node line");
  if (!have_sink) parse_fail(line_no, "missing sink node line");
  if (inst.net.arc_count() != declared_arcs)
    parse_fail(line_no, "arc count does not match the problem line");
  if (inst.net.source == inst.net.sink) parse_fail(line_no, "source equals sink");
  inst.net.validate();
  return inst;
}

Instance parse_instance_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::Parse, "cannot open instance file " + path);
  return parse_instance(in);
}

std::string format_instance(const Instance& inst) {
  std::ostringstream out;
  out << "p fot " << inst.net.node_count << " " << inst.net.arc_count() << " "
      << inst.horizon << "\n";
  out << "n " << inst.net.source + 1 << " s\n";
  out << "n " << inst.net.sink + 1 << " t\n";
  for (const Arc& a : inst.net.arcs)
    out << "a " << a.tail + 1 << " " << a.head + 1 << " " << a.capacity << " " << a.cost
        << " " << a.transit << "\n";
  return out.str();
}

std::uint64_t instance_digest(const Instance& inst) {
  // FNV-1a over the canonical text.
  std::string text = format_instance(inst);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

ResultFile make_result(const Instance& inst, const NormalizedNetwork& norm,
                       const SolveResult& solved) {
  ResultFile r;
  r.nodes = inst.net.node_count;
  r.arcs = inst.net.arc_count();
  r.horizon = inst.horizon;
  r.digest = instance_digest(inst);
  r.value = solved.value;
  r.cost = solved.cost;
  if (solved.certificates.has_interval) {
    r.theta1 = solved.certificates.best_interval.theta1;
    r.theta2 = solved.certificates.best_interval.theta2;
    for (ArcId a = 0; a < inst.net.arc_count(); ++a) {
      ArcId first = norm.subdivision[static_cast<size_t>(a)].front();
      Cap v = solved.certificates.best_interval.pattern[static_cast<size_t>(first)];
      if (v != 0) r.pattern.push_back({a, v});
    }
  }
  r.feasible = solved.certificates.feasible;
  r.maximal = solved.certificates.maximal;
  r.optimal = solved.certificates.residual_clean;
  r.complete = solved.certificates.construction_complete;

  FlowOverTime f = solved.flow_over_time();
  for (ArcId a = 0; a < inst.net.arc_count(); ++a) {
    ArcId first = norm.subdivision[static_cast<size_t>(a)].front();
    for (int layer = 1; layer <= inst.horizon; ++layer) {
      Cap v = layer_value(f, first, layer);
      if (v != 0) r.flows.push_back({a, layer, v});
    }
  }
  r.step11 = solved.log.count(LogEntry::Phase::Step11);
  r.step12 = solved.log.count(LogEntry::Phase::Step12);
  r.step2 = solved.log.count(LogEntry::Phase::Step2);
  r.fallback = solved.log.count(LogEntry::Phase::Fallback);
  return r;
}

std::string format_result(const ResultFile& r) {
  std::ostringstream out;
  out << "c fot result\n";
  out << "p res " << r.nodes << " " << r.arcs << " " << r.horizon << "\n";
  out << "d " << r.digest << "\n";
  out << "v " << r.value << "\n";
  out << "k " << r.cost << "\n";
  out << "i " << r.theta1 << " " << r.theta2 << "\n";
  out << "g " << r.feasible << " " << r.maximal << " " << r.optimal << " " << r.complete
      << "\n";
  for (const auto& [arc, v] : r.pattern) out << "r " << arc + 1 << " " << v << "\n";
  for (const auto& [arc, layer, v] : r.flows)
    out << "f " << arc + 1 << " " << layer << " " << v << "\n";
  out << "s " << r.step11 << " " << r.step12 << " " << r.step2 << " " << r.fallback << "\n";
  return out.str();
}

ResultFile parse_result(std::istream& in) {
  ResultFile r;
  int line_no = 0;
  bool have_header = false;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "c") continue;
    if (tag == "p") {
      std::string kind;
      if (!(ls >> kind >> r.nodes >> r.arcs >> r.horizon) || kind != "res")
        parse_fail(line_no, "expected 'p res <nodes> <arcs> <theta>'");
      have_header = true;
      continue;
    }
    if (!have_header) parse_fail(line_no, "result header must come first");
    if (tag == "d") {
      if (!(ls >> r.digest)) parse_fail(line_no, "bad digest line");
    } else if (tag == "v") {
      if (!(ls >> r.value)) parse_fail(line_no, "bad value line");
    } else if (tag == "k") {
      if (!(ls >> r.cost)) parse_fail(line_no, "bad cost line");
    } else if (tag == "i") {
      if (!(ls >> r.theta1 >> r.theta2)) parse_fail(line_no, "bad interval line");
    } else if (tag == "g") {
      if (!(ls >> r.feasible >> r.maximal >> r.optimal >> r.complete))
        parse_fail(line_no, "bad flag line");
    } else if (tag == "r") {
      int arc;
      Cap v;
      if (!(ls >> arc >> v)) parse_fail(line_no, "bad pattern line");
      r.pattern.push_back({arc - 1, v});
    } else if (tag == "f") {
      int arc, layer;
      Cap v;
      if (!(ls >> arc >> layer >> v)) parse_fail(line_no, "bad flow line");
      r.flows.push_back({arc - 1, layer, v});
    } else if (tag == "s") {
      if (!(ls >> r.step11 >> r.step12 >> r.step2 >> r.fallback))
        parse_fail(line_no, "bad summary line");
    } else {
      parse_fail(line_no, "unknown line tag '" + tag + "'");
    }
  }
  require(have_header, ErrorKind::Parse, "missing result header");
  return r;
}

ResultFile parse_result_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::Parse, "cannot open result file " + path);
  return parse_result(in);
}

StaticFlow reconstruct_ten_flow(const NormalizedNetwork& norm, const TimeExpandedNetwork& ten,
                                const ResultFile& result) {
  StaticFlow f = zero_flow(ten.net);
  // A subdivision chain forwards its flow one layer per segment.
  for (const auto& [arc, layer, v] : result.flows) {
    require(arc >= 0 && arc < static_cast<int>(norm.subdivision.size()), ErrorKind::Parse,
            "flow entry references an unknown arc");
    const auto& chain = norm.subdivision[static_cast<size_t>(arc)];
    int at = layer;
    for (ArcId segment : chain) {
      ArcId copy = ten.copy_arc(segment, at);
      require(copy >= 0, ErrorKind::Parse, "flow entry outside the horizon");
      f[copy] += v;
      at += static_cast<int>(norm.base.arc(segment).transit);
    }
  }
  // Super arcs balance the per-layer imbalance at the source and sink copies.
  std::vector<Cap> net_out(static_cast<size_t>(ten.net.node_count), 0);
  for (ArcId a = 0; a < ten.net.arc_count(); ++a) {
    net_out[static_cast<size_t>(ten.net.arc(a).tail)] += f[a];
    net_out[static_cast<size_t>(ten.net.arc(a).head)] -= f[a];
  }
  for (ArcId a = 0; a < ten.net.arc_count(); ++a) {
    const auto& inf = ten.info[static_cast<size_t>(a)];
    switch (inf.kind) {
      case TimeExpandedNetwork::ArcKind::FromSuperSource: {
        Cap need = net_out[static_cast<size_t>(ten.net.arc(a).head)];
        if (need > 0) f[a] = need;
        break;
      }
      case TimeExpandedNetwork::ArcKind::IntoSuperSource: {
        Cap need = net_out[static_cast<size_t>(ten.net.arc(a).tail)];
        if (need < 0) f[a] = -need;  // returning flow absorbed at the source
        break;
      }
      case TimeExpandedNetwork::ArcKind::ToSuperSink: {
        Cap need = net_out[static_cast<size_t>(ten.net.arc(a).tail)];
        if (need < 0) f[a] = -need;
        break;
      }
      case TimeExpandedNetwork::ArcKind::FromSuperSink: {
        Cap need = net_out[static_cast<size_t>(ten.net.arc(a).head)];
        if (need > 0) f[a] = need;  // flow lent out by the sink
        break;
      }
      case TimeExpandedNetwork::ArcKind::Copy:
        break;
    }
  }
  check_feasible(ten.net, f);
  f.value = flow_value(ten.net, f);
  return f;
}

Generated generate_instance(const GenParams& params) {
  require(params.nodes >= 2, ErrorKind::BadRange, "generator needs at least two nodes");
  require(params.arcs >= 0 && params.max_u >= 1 && params.max_tau >= 0,
          ErrorKind::BadRange, "bad generator parameters");
  std::mt19937_64 rng(params.seed);
  auto draw = [&](std::int64_t lo, std::int64_t hi) {  // inclusive, deterministic
    return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };

  Generated gen;
  Instance& inst = gen.instance;
  inst.horizon = params.theta;
  inst.net.node_count = params.nodes;
  inst.net.source = 0;
  inst.net.sink = 1;
  for (int i = 0; i < params.arcs; ++i) {
    NodeId tail = static_cast<NodeId>(draw(0, params.nodes - 1));
    NodeId head = static_cast<NodeId>(draw(0, params.nodes - 2));
    if (head >= tail) ++head;  // no self-loops
    Cap u = draw(1, params.max_u);
    Cost c = draw(-params.max_c, params.max_c);
    Transit t = draw(0, params.max_tau);
    inst.net.arcs.push_back({tail, head, u, t, c});
  }
  inst.net.validate();

  std::deque<NodeId> queue{inst.net.source};
  std::vector<char> seen(static_cast<size_t>(params.nodes), 0);
  seen[0] = 1;
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    for (const Arc& a : inst.net.arcs)
      if (a.tail == v && !seen[static_cast<size_t>(a.head)]) {
        seen[static_cast<size_t>(a.head)] = 1;
        queue.push_back(a.head);
      }
  }
  gen.source_reaches_sink = seen[static_cast<size_t>(inst.net.sink)] != 0;
  return gen;
}

}  // namespace fot
