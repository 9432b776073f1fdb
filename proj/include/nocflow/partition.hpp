#pragma once
// Community discovery on the dependency graph: iterative removal of the most
// negatively curved edge, preferential attachment of undersized/surplus
// components, the quality function Q, and candidate selection across target
// community counts.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "nocflow/arch.hpp"
#include "nocflow/curvature.hpp"
#include "nocflow/ddg.hpp"

namespace nocflow {

struct PartitionOptions {
  DistanceMode distance_mode = DistanceMode::Hop;
  double idleness = 0.0;
  enum class Selection { MinCut, MaxQ };
  Selection selection = Selection::MinCut;
  int min_size = 0;                   // 0 = auto: max(1, ceil(|V| / (4*count)))
  double bytes_per_weight_unit = 1.0; // converts weight units to bytes for E_L
  int mesh_a = 2;
  int mesh_b = 2;
  NocParams noc;
};

// Curvature below this counts as negative; uniform masses of 1/deg make exact
// zero crossings fuzzy at double precision.
inline constexpr double kCurvatureEps = 1e-9;

struct RemovalStep {
  std::pair<int, int> edge;
  double curvature;
};

struct PruneResult {
  UGraph graph;
  std::vector<RemovalStep> removed;
};

// Repeatedly removes the single most negatively curved edge (ties: lowest
// (u,v) pair) and recomputes curvature only for edges incident to the removed
// edge's endpoints — a documented approximation of full invalidation. Stops
// when no edge is negative.
inline PruneResult remove_negative_loop(UGraph g,
                                        DistanceMode mode = DistanceMode::Hop,
                                        double idleness = 0.0) {
  PruneResult out;
  auto curv = orc_all(g, mode, idleness);
  while (!curv.empty()) {
    auto worst = curv.begin();
    for (auto it = curv.begin(); it != curv.end(); ++it)
      if (it->second < worst->second) worst = it;
    if (worst->second >= -kCurvatureEps) break;

    auto [u, v] = worst->first;
    out.removed.push_back({worst->first, worst->second});
    g.remove_edge(u, v);
    curv.erase(worst->first);
    for (auto& [edge, kappa] : curv) {
      auto [x, y] = edge;
      if (x == u || x == v || y == u || y == v)
        kappa = orc_edge(g, x, y, mode, idleness);
    }
  }
  out.graph = std::move(g);
  return out;
}

inline std::vector<std::vector<int>> connected_components(const UGraph& g) {
  std::vector<std::vector<int>> comps;
  std::set<int> seen;
  for (const auto& [start, nbrs] : g.adj) {
    if (seen.count(start)) continue;
    std::vector<int> comp, stack{start};
    seen.insert(start);
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      comp.push_back(u);
      for (const auto& [v, w] : g.adj.at(u))
        if (seen.insert(v).second) stack.push_back(v);
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

// Merges undersized components and surplus components (smallest first; ties by
// lowest member id) into the community holding the largest total original
// edge weight to the victim; ties again by lowest member id.
inline std::vector<std::vector<int>> preferential_attachment(
    std::vector<std::vector<int>> comps, const UGraph& original, int target,
    int min_size) {
  size_t node_count = 0;
  for (const auto& c : comps) node_count += c.size();
  if (target < 1) throw std::invalid_argument("community target below 1");
  if (static_cast<size_t>(target) > node_count)
    throw std::invalid_argument("community target exceeds node count");

  auto comm_id = [](const std::vector<int>& c) { return c.front(); };  // min id

  while (comps.size() > 1) {
    size_t smallest = 0;
    for (size_t i = 1; i < comps.size(); ++i) {
      if (comps[i].size() < comps[smallest].size() ||
          (comps[i].size() == comps[smallest].size() &&
           comm_id(comps[i]) < comm_id(comps[smallest])))
        smallest = i;
    }
    bool surplus = comps.size() > static_cast<size_t>(target);
    bool undersized = comps[smallest].size() < static_cast<size_t>(min_size);
    if (!surplus && !undersized) break;

    size_t dest = smallest == 0 ? 1 : 0;
    double best_w = -1.0;
    for (size_t j = 0; j < comps.size(); ++j) {
      if (j == smallest) continue;
      double w = 0.0;
      for (int u : comps[smallest])
        for (int v : comps[j]) w += original.weight(u, v);
      if (w > best_w ||
          (w == best_w && comm_id(comps[j]) < comm_id(comps[dest])))
        best_w = w, dest = j;
    }
    std::vector<int> merged;
    std::merge(comps[dest].begin(), comps[dest].end(), comps[smallest].begin(),
               comps[smallest].end(), std::back_inserter(merged));
    comps[dest] = std::move(merged);
    comps.erase(comps.begin() + static_cast<std::ptrdiff_t>(smallest));
  }
  std::sort(comps.begin(), comps.end(),
            [&](const auto& a, const auto& b) { return comm_id(a) < comm_id(b); });
  return comps;
}

struct EnergyEstimate {
  std::map<int, double> cluster_node_energy;  // E_N_c per community
  double link_energy = 0.0;   // E_L: estimated interconnect energy of the cut
  double total_energy = 0.0;  // normalizer: all node energy + E_L at full weight
};

// Pre-mapping link energy for a given amount of edge weight: convert weight to
// bits, then charge the mesh's expected per-bit route energy (mean router
// count over uniformly random tile pairs).
inline double estimated_link_energy(double weight, const PartitionOptions& o) {
  double bits = weight * o.bytes_per_weight_unit * 8.0;
  double eta = mean_router_count(o.mesh_a, o.mesh_b);
  return bits * (eta * o.noc.e_s_bit + (eta - 1.0) * o.noc.e_l_bit);
}

inline EnergyEstimate estimate_energy(const Ddg& g, const NodePartition& part,
                                      const ClusterStats& stats,
                                      const PartitionOptions& opts) {
  EnergyEstimate est;
  for (const auto& [c, w] : stats.internal_weight)
    est.cluster_node_energy.emplace(c, 0.0);
  for (const auto& n : g.nodes) est.cluster_node_energy[part.at(n.id)] += n.energy_j;
  est.link_energy = estimated_link_energy(stats.cut_weight, opts);
  est.total_energy =
      g.total_node_energy() + estimated_link_energy(stats.total_weight, opts);
  return est;
}

// Q = sum_c [(W_c - S_c)/W - (W_c - Wbar)^2 / W] - (sum_c E_N_c + E_L) / E.
// W = 0 leaves the structural terms at 0 by convention; E = 0 is an error.
inline double quality(const ClusterStats& stats, const EnergyEstimate& est) {
  double q = 0.0;
  if (stats.total_weight > 0.0) {
    for (const auto& [c, wc] : stats.internal_weight) {
      double sc = stats.boundary_weight.at(c);
      double dev = wc - stats.mean_internal;
      q += (wc - sc) / stats.total_weight - dev * dev / stats.total_weight;
    }
  }
  double e_n = 0.0;
  for (const auto& [c, e] : est.cluster_node_energy) e_n += e;
  if (est.total_energy <= 0.0)
    throw std::invalid_argument("total energy normalizer is zero");
  return q - (e_n + est.link_energy) / est.total_energy;
}

struct PartitionCandidate {
  int requested_count = 0;
  int n_c = 0;
  double q = 0.0;
  double inter_cluster_weight = 0.0;
  NodePartition assignment;
};

struct Partition {
  NodePartition assignment;
  int n_c = 0;
  double q = 0.0;
  double inter_cluster_weight = 0.0;
  std::vector<PartitionCandidate> candidates;
};

inline NodePartition assignment_from_components(
    const std::vector<std::vector<int>>& comps) {
  NodePartition part;
  for (size_t i = 0; i < comps.size(); ++i)
    for (int n : comps[i]) part[n] = static_cast<int>(i);
  return part;
}

// Runs the prune once, then derives one candidate per target count in 2..N and
// picks the winner by the configured rule (default: minimum inter-cluster
// weight, ties by maximum Q, then by fewest communities).
inline Partition discover_communities(const Ddg& g, int cores,
                                      const PartitionOptions& opts = {}) {
  if (g.nodes.empty()) throw std::invalid_argument("empty graph");
  if (cores < 2) throw std::invalid_argument("need at least 2 cores");

  UGraph u = UGraph::from_ddg(g);
  PruneResult pruned = remove_negative_loop(u, opts.distance_mode, opts.idleness);
  auto comps = connected_components(pruned.graph);

  Partition result;
  int node_count = static_cast<int>(g.nodes.size());
  int max_count = std::min(cores, node_count);
  for (int count = 2; count <= max_count; ++count) {
    int min_size = opts.min_size > 0
                       ? opts.min_size
                       : std::max(1, (node_count + 4 * count - 1) / (4 * count));
    auto comm = preferential_attachment(comps, u, count, min_size);
    PartitionCandidate cand;
    cand.requested_count = count;
    cand.n_c = static_cast<int>(comm.size());
    cand.assignment = assignment_from_components(comm);
    ClusterStats stats = cluster_stats(g, cand.assignment);
    cand.inter_cluster_weight = stats.cut_weight;
    cand.q = quality(stats, estimate_energy(g, cand.assignment, stats, opts));
    result.candidates.push_back(std::move(cand));
  }
  if (result.candidates.empty())
    throw std::invalid_argument("graph too small to partition");

  const PartitionCandidate* best = &result.candidates.front();
  for (const auto& c : result.candidates) {
    bool better;
    if (opts.selection == PartitionOptions::Selection::MinCut) {
      better = c.inter_cluster_weight < best->inter_cluster_weight ||
               (c.inter_cluster_weight == best->inter_cluster_weight &&
                (c.q > best->q || (c.q == best->q && c.n_c < best->n_c)));
    } else {
      better = c.q > best->q ||
               (c.q == best->q &&
                (c.inter_cluster_weight < best->inter_cluster_weight ||
                 (c.inter_cluster_weight == best->inter_cluster_weight &&
                  c.n_c < best->n_c)));
    }
    if (better) best = &c;
  }
  result.assignment = best->assignment;
  result.n_c = best->n_c;
  result.q = best->q;
  result.inter_cluster_weight = best->inter_cluster_weight;
  return result;
}

}  // namespace nocflow
