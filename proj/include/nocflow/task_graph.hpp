#pragma once
// Cluster-level task graph: aggregates the node partition into a DAG with
// inter-cluster data volumes, execution times, topological depths, and a
// stable digest for cross-checking derived reports.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "nocflow/ddg.hpp"

namespace nocflow {

struct TaskNode {
  int id = 0;
  double energy_j = 0.0;
  std::int64_t exec_ns = 10;  // fixture default when not derived from a trace
};

struct TaskEdge {
  int from = 0;
  int to = 0;
  std::int64_t volume_bits = 0;
  double bandwidth_bps = 0.0;  // carried for schema fidelity; no consumer yet
};

struct TaskGraph {
  std::vector<TaskNode> nodes;  // ascending id
  std::vector<TaskEdge> edges;  // ascending (from, to)
  std::vector<std::string> warnings;

  const TaskNode& node(int id) const {
    for (const auto& n : nodes)
      if (n.id == id) return n;
    throw std::out_of_range("no cluster " + std::to_string(id));
  }

  double total_node_energy() const {
    double e = 0.0;
    for (const auto& n : nodes) e += n.energy_j;
    return e;
  }
};

namespace detail {

// Tarjan SCCs over a small adjacency map; returns components in deterministic
// order (each sorted ascending).
inline std::vector<std::vector<int>> strongly_connected(
    const std::map<int, std::set<int>>& adj) {
  std::map<int, int> index, low;
  std::set<int> on_stack;
  std::vector<int> stack;
  std::vector<std::vector<int>> sccs;
  int counter = 0;

  std::function<void(int)> strong = [&](int v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack.insert(v);
    auto it = adj.find(v);
    if (it != adj.end()) {
      for (int w : it->second) {
        if (!index.count(w)) {
          strong(w);
          low[v] = std::min(low[v], low[w]);
        } else if (on_stack.count(w)) {
          low[v] = std::min(low[v], index[w]);
        }
      }
    }
    if (low[v] == index[v]) {
      std::vector<int> comp;
      while (true) {
        int w = stack.back();
        stack.pop_back();
        on_stack.erase(w);
        comp.push_back(w);
        if (w == v) break;
      }
      std::sort(comp.begin(), comp.end());
      sccs.push_back(std::move(comp));
    }
  };
  for (const auto& [v, out] : adj)
    if (!index.count(v)) strong(v);
  std::sort(sccs.begin(), sccs.end());
  return sccs;
}

}  // namespace detail

// Aggregates a partition into clusters: execution time is the summed member
// latency scaled to ns, volumes are the summed data bits of crossing edges.
// If community-level dependencies form a cycle, the involved communities are
// merged (with a warning) so the result is a DAG.
inline TaskGraph build_task_graph(const Ddg& g, const NodePartition& part,
                                  double ns_per_cycle = 1.0) {
  std::map<int, std::set<int>> adj;
  std::set<int> comm_ids;
  for (const auto& n : g.nodes) {
    auto it = part.find(n.id);
    if (it == part.end())
      throw std::invalid_argument("partition missing node " +
                                  std::to_string(n.id));
    comm_ids.insert(it->second);
    adj[it->second];
  }
  for (const auto& e : g.edges) {
    int cu = part.at(e.from), cv = part.at(e.to);
    if (cu != cv) adj[cu].insert(cv);
  }

  TaskGraph tg;
  auto sccs = detail::strongly_connected(adj);
  std::map<int, int> final_of;  // community -> final cluster id
  {
    int next = 0;
    for (const auto& scc : sccs) {
      if (scc.size() > 1) {
        std::string members;
        for (int c : scc) members += (members.empty() ? "" : ",") + std::to_string(c);
        tg.warnings.push_back("communities {" + members +
                              "} depend on each other in a cycle; merged into "
                              "one cluster");
      }
      for (int c : scc) final_of[c] = next;
      ++next;
    }
  }

  std::map<int, TaskNode> nodes;
  for (const auto& [c, f] : final_of) nodes[f].id = f;
  std::map<int, double> cycles_per_cluster;
  for (const auto& n : g.nodes) {
    int f = final_of.at(part.at(n.id));
    nodes[f].energy_j += n.energy_j;
    cycles_per_cluster[f] += static_cast<double>(n.latency);
  }
  for (auto& [f, node] : nodes)
    node.exec_ns = static_cast<std::int64_t>(
        std::llround(cycles_per_cluster[f] * ns_per_cycle));

  std::map<std::pair<int, int>, std::int64_t> volumes;
  for (const auto& e : g.edges) {
    int fu = final_of.at(part.at(e.from)), fv = final_of.at(part.at(e.to));
    if (fu != fv) volumes[{fu, fv}] += e.bits;
  }

  for (const auto& [f, node] : nodes) tg.nodes.push_back(node);
  for (const auto& [key, bits] : volumes)
    tg.edges.push_back({key.first, key.second, bits, 0.0});
  return tg;
}

// Longest path in edges from any root (zero in-degree) to each cluster.
inline std::map<int, int> depth_assign(const TaskGraph& tg) {
  std::map<int, std::vector<int>> out;
  std::map<int, int> indeg, depth;
  for (const auto& n : tg.nodes) {
    indeg[n.id] = 0;
    depth[n.id] = 0;
  }
  for (const auto& e : tg.edges) {
    out[e.from].push_back(e.to);
    ++indeg[e.to];
  }
  std::vector<int> ready;
  for (const auto& [id, d] : indeg)
    if (d == 0) ready.push_back(id);
  std::sort(ready.begin(), ready.end(), std::greater<>());
  size_t seen = 0;
  while (!ready.empty()) {
    int u = ready.back();
    ready.pop_back();
    ++seen;
    for (int v : out[u]) {
      depth[v] = std::max(depth[v], depth[u] + 1);
      if (--indeg[v] == 0) ready.push_back(v);
    }
  }
  if (seen != tg.nodes.size())
    throw std::logic_error("task graph contains a cycle");
  return depth;
}

// Content fingerprint (hex string) so downstream mappings and reports can be
// matched to the task graph that produced them. Nodes and edges are hashed in
// their stored (sorted) order.
inline std::string task_graph_digest(const TaskGraph& tg) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  auto mix = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
  };
  char buf[64];
  for (const auto& n : tg.nodes) {
    std::snprintf(buf, sizeof buf, "n%d:%.17g:%lld;", n.id, n.energy_j,
                  static_cast<long long>(n.exec_ns));
    mix(buf);
  }
  for (const auto& e : tg.edges) {
    std::snprintf(buf, sizeof buf, "e%d>%d:%lld;", e.from, e.to,
                  static_cast<long long>(e.volume_bits));
    mix(buf);
  }
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace nocflow
