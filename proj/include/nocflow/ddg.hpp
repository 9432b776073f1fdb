#pragma once
// Weighted directed data-dependency graph built from a parsed trace and its
// dependency tables, plus per-cluster weight statistics used by the quality
// function.

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "nocflow/trace.hpp"

namespace nocflow {

struct DdgNode {
  int id = 0;  // equals the instruction's line number
  Opcode opcode = Opcode::Add;
  Group group = Group::G;
  double energy_j = 0.0;
  int latency = 0;    // cycles
  int data_size = 0;  // bytes of the produced/stored value
};

struct DdgEdge {
  int from = 0;
  int to = 0;
  double weight = 0.0;       // latency x data size, summed over merged deps
  std::int64_t bits = 0;     // producer data bits carried, summed over merged deps
};

struct Ddg {
  std::vector<DdgNode> nodes;  // ascending id
  std::vector<DdgEdge> edges;  // ascending (from, to)

  const DdgNode& node(int id) const {
    auto it = std::lower_bound(
        nodes.begin(), nodes.end(), id,
        [](const DdgNode& n, int v) { return n.id < v; });
    if (it == nodes.end() || it->id != id)
      throw std::out_of_range("no node " + std::to_string(id));
    return *it;
  }

  double total_weight() const {
    double w = 0.0;
    for (const auto& e : edges) w += e.weight;
    return w;
  }

  double total_node_energy() const {
    double e = 0.0;
    for (const auto& n : nodes) e += n.energy_j;
    return e;
  }
};

inline double edge_weight(int latency, int data_size) {
  return static_cast<double>(latency) * static_cast<double>(data_size);
}

// One node per instruction; one edge per dependency entry, weighted by the
// producer's latency x data size. Parallel dependencies between the same pair
// merge into a single edge with summed weight. A branch additionally connects
// to the next executed instruction (1-byte payload) so dynamic control order
// is kept in the graph.
inline Ddg build_ddg(const TraceProgram& prog, const DependencyTables& tables,
                     const EnergyTable& energy) {
  Ddg g;
  g.nodes.reserve(prog.instructions.size());
  for (const auto& ins : prog.instructions) {
    Group gr = classify(ins.opcode);
    g.nodes.push_back({ins.line_no, ins.opcode, gr, energy.cost(gr),
                       ins.latency, ins.data_size});
  }

  std::map<std::pair<int, int>, DdgEdge> merged;
  auto add = [&](int from, int to, double w, std::int64_t bits) {
    auto& e = merged[{from, to}];
    e.from = from;
    e.to = to;
    e.weight += w;
    e.bits += bits;
  };

  for (const auto& [consumer, deps] : tables.dep_table)
    for (const auto& d : deps)
      add(d.producer_line, consumer, edge_weight(d.latency, d.data_size),
          static_cast<std::int64_t>(d.data_size) * 8);

  for (const auto& ins : prog.instructions)
    if (ins.opcode == Opcode::Br &&
        ins.line_no < static_cast<int>(prog.instructions.size()))
      add(ins.line_no, ins.line_no + 1, edge_weight(ins.latency, 1), 8);

  g.edges.reserve(merged.size());
  for (auto& [key, e] : merged) g.edges.push_back(e);
  return g;
}

// node id -> community id; the shared currency between partitioning, task
// graph construction, and the statistics below.
using NodePartition = std::map<int, int>;

struct ClusterStats {
  std::map<int, double> internal_weight;  // W_c per community
  std::map<int, double> boundary_weight;  // S_c per community
  double total_weight = 0.0;              // W over the whole graph
  double cut_weight = 0.0;                // total inter-community weight
  double mean_internal = 0.0;             // average W_c over communities
};

// Conservation: sum(W_c) + cut = W and sum(S_c) = 2*cut.
inline ClusterStats cluster_stats(const Ddg& g, const NodePartition& part) {
  ClusterStats s;
  for (const auto& n : g.nodes) {
    auto it = part.find(n.id);
    if (it == part.end())
      throw std::invalid_argument("partition missing node " +
                                  std::to_string(n.id));
    s.internal_weight.emplace(it->second, 0.0);
    s.boundary_weight.emplace(it->second, 0.0);
  }
  for (const auto& e : g.edges) {
    int cu = part.at(e.from), cv = part.at(e.to);
    s.total_weight += e.weight;
    if (cu == cv) {
      s.internal_weight[cu] += e.weight;
    } else {
      s.cut_weight += e.weight;
      s.boundary_weight[cu] += e.weight;
      s.boundary_weight[cv] += e.weight;
    }
  }
  if (!s.internal_weight.empty()) {
    double sum = 0.0;
    for (const auto& [c, w] : s.internal_weight) sum += w;
    s.mean_internal = sum / static_cast<double>(s.internal_weight.size());
  }
  return s;
}

// True when every edge goes from a lower to a higher topological layer; DDGs
// from dynamic traces always satisfy this (producer line < consumer line).
inline bool is_acyclic(const Ddg& g) {
  std::map<int, std::vector<int>> out;
  std::map<int, int> indeg;
  for (const auto& n : g.nodes) indeg[n.id] = 0;
  for (const auto& e : g.edges) {
    out[e.from].push_back(e.to);
    ++indeg[e.to];
  }
  std::vector<int> ready;
  for (const auto& [id, d] : indeg)
    if (d == 0) ready.push_back(id);
  size_t seen = 0;
  while (!ready.empty()) {
    int id = ready.back();
    ready.pop_back();
    ++seen;
    for (int to : out[id])
      if (--indeg[to] == 0) ready.push_back(to);
  }
  return seen == g.nodes.size();
}

}  // namespace nocflow
