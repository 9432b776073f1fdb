#pragma once
// Graphviz DOT export for dependency graphs and cluster task graphs.
// Output is fully deterministic: nodes and edges are emitted in their stored
// (sorted) order and numbers use a fixed format.

#include <cstdio>
#include <map>
#include <sstream>
#include <string>

#include "nocflow/ddg.hpp"
#include "nocflow/task_graph.hpp"

namespace nocflow {

namespace detail {

inline std::string dot_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace detail

// Instruction-level dependency graph. Node label: "<line>: <opcode> (<group>)".
inline std::string export_dot(const Ddg& g) {
  std::ostringstream os;
  os << "digraph ddg {\n";
  os << "  rankdir=TB;\n";
  os << "  node [shape=box, fontsize=10];\n";
  for (const auto& n : g.nodes) {
    os << "  n" << n.id << " [label=\"" << n.id << ": " << opcode_name(n.opcode)
       << " (" << group_name(n.group) << ")\"];\n";
  }
  for (const auto& e : g.edges) {
    os << "  n" << e.from << " -> n" << e.to << " [label=\""
       << detail::dot_num(e.weight) << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

// Cluster task graph. Node label carries execution time and (when supplied)
// the topological depth used by depth-ordered mapping; edge label is the
// communication volume in bits.
inline std::string export_dot(const TaskGraph& tg,
                              const std::map<int, int>* depths = nullptr) {
  std::ostringstream os;
  os << "digraph task_graph {\n";
  os << "  rankdir=TB;\n";
  os << "  node [shape=ellipse, fontsize=10];\n";
  for (const auto& n : tg.nodes) {
    os << "  c" << n.id << " [label=\"c" << n.id;
    if (depths) {
      auto it = depths->find(n.id);
      if (it != depths->end()) os << " depth=" << it->second;
    }
    os << " exec=" << n.exec_ns << "ns\"];\n";
  }
  for (const auto& e : tg.edges) {
    os << "  c" << e.from << " -> c" << e.to << " [label=\"" << e.volume_bits
       << "b\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace nocflow
