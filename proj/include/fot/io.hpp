#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fot/construction.hpp"
#include "fot/network.hpp"
#include "fot/oracle.hpp"

namespace fot {

// A flow-over-time instance as read from a .fot file. Node ids in the file
// are 1-based; internally nodes are 0-based in file order.
struct Instance {
  Network net;
  int horizon = 0;
};

// Line format:
//   c <comment>
//   p fot <nodes> <arcs> <theta>
//   n <id> s|t
//   a <tail> <head> <capacity> <cost> <transit>
Instance parse_instance(std::istream& in);
Instance parse_instance_file(const std::string& path);

std::string format_instance(const Instance& inst);

std::uint64_t instance_digest(const Instance& inst);

// Solved-instance document: digest, value, cost, certificate flags, the best
// repeated interval with its pattern, nonzero per-arc-per-layer flows on the
// original arcs, and an iteration summary.
struct ResultFile {
  int nodes = 0;
  int arcs = 0;
  int horizon = 0;
  std::uint64_t digest = 0;
  Cap value = 0;
  Cost cost = 0;
  int theta1 = 0, theta2 = 0;  // 0 0 when no repeated interval exists
  bool feasible = false;
  bool maximal = false;
  bool optimal = false;
  bool complete = false;  // construction finished without fallback
  std::vector<std::pair<int, Cap>> pattern;              // original arc -> value
  std::vector<std::tuple<int, int, Cap>> flows;          // arc, layer, value
  int step11 = 0, step12 = 0, step2 = 0, fallback = 0;
};

ResultFile make_result(const Instance& inst, const NormalizedNetwork& norm,
                       const SolveResult& solved);

std::string format_result(const ResultFile& result);
ResultFile parse_result(std::istream& in);
ResultFile parse_result_file(const std::string& path);

// Rebuilds the flow on the time expansion of the (re-normalized) instance
// from a result's original-arc layer entries.
StaticFlow reconstruct_ten_flow(const NormalizedNetwork& norm, const TimeExpandedNetwork& ten,
                                const ResultFile& result);

struct GenParams {
  int nodes = 4;
  int arcs = 6;
  Cap max_u = 3;
  Cost max_c = 5;
  Transit max_tau = 2;
  std::uint64_t seed = 1;
  int theta = 10;
};

struct Generated {
  Instance instance;
  bool source_reaches_sink = false;
};

// Deterministic: identical parameters produce byte-identical instances.
Generated generate_instance(const GenParams& params);

}  // namespace fot
