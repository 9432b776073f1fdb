#pragma once
// Edge curvature on the undirected view of a dependency graph: uniform
// neighbor measures, hop/weighted ground distances, exact Wasserstein-1 via
// successive-shortest-path min-cost flow, and the per-edge curvature value
// kappa = 1 - W1/d.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>
#include <vector>

#include "nocflow/ddg.hpp"

namespace nocflow {

// Undirected simplification: parallel/antiparallel edges merged, weights
// summed. Node set is preserved, so pruning can isolate nodes.
struct UGraph {
  std::map<int, std::map<int, double>> adj;

  static UGraph from_ddg(const Ddg& g) {
    UGraph u;
    for (const auto& n : g.nodes) u.adj[n.id];
    for (const auto& e : g.edges) {
      if (e.from == e.to) continue;
      u.adj[e.from][e.to] += e.weight;
      u.adj[e.to][e.from] += e.weight;
    }
    return u;
  }

  size_t node_count() const { return adj.size(); }

  size_t edge_count() const {
    size_t n = 0;
    for (const auto& [u, nbrs] : adj)
      for (const auto& [v, w] : nbrs)
        if (u < v) ++n;
    return n;
  }

  // Edges as (u, v) with u < v, ascending; this ordering is the deterministic
  // tie-break identity of an edge.
  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    for (const auto& [u, nbrs] : adj)
      for (const auto& [v, w] : nbrs)
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  int degree(int u) const {
    auto it = adj.find(u);
    return it == adj.end() ? 0 : static_cast<int>(it->second.size());
  }

  bool has_edge(int u, int v) const {
    auto it = adj.find(u);
    return it != adj.end() && it->second.count(v) > 0;
  }

  double weight(int u, int v) const {
    auto it = adj.find(u);
    if (it == adj.end()) return 0.0;
    auto jt = it->second.find(v);
    return jt == it->second.end() ? 0.0 : jt->second;
  }

  void remove_edge(int u, int v) {
    adj[u].erase(v);
    adj[v].erase(u);
  }
};

enum class DistanceMode { Hop, Weighted };

struct NeighborMeasure {
  int base = 0;
  std::vector<int> support;  // ascending node ids
  std::vector<double> mass;  // same order, sums to 1
};

// Uniform mass over neighbors; optional idleness alpha keeps mass alpha at the
// node itself and spreads the rest.
inline NeighborMeasure neighbor_measure(const UGraph& g, int node,
                                        double idleness = 0.0) {
  auto it = g.adj.find(node);
  if (it == g.adj.end() || it->second.empty())
    throw std::invalid_argument("isolated node " + std::to_string(node) +
                                " has no neighbor measure");
  if (idleness < 0.0 || idleness >= 1.0)
    throw std::invalid_argument("idleness must be in [0, 1)");
  NeighborMeasure m;
  m.base = node;
  double share = (1.0 - idleness) / static_cast<double>(it->second.size());
  if (idleness > 0.0) {
    m.support.push_back(node);
    m.mass.push_back(idleness);
  }
  for (const auto& [nbr, w] : it->second) {
    m.support.push_back(nbr);
    m.mass.push_back(share);
  }
  // Keep support ascending even when the base sits between neighbor ids.
  std::vector<size_t> order(m.support.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return m.support[a] < m.support[b]; });
  NeighborMeasure sorted;
  sorted.base = node;
  for (size_t i : order) {
    sorted.support.push_back(m.support[i]);
    sorted.mass.push_back(m.mass[i]);
  }
  return sorted;
}

// Sentinel distance for unreachable pairs: strictly above every real path
// length (hop paths are at most |V|-1; weighted paths at most |V| * w_max), so
// transport costs stay finite on split graphs.
inline double unreachable_distance(const UGraph& g, DistanceMode mode) {
  double n = static_cast<double>(g.node_count());
  if (mode == DistanceMode::Hop) return n;
  double wmax = 0.0;
  for (const auto& [u, nbrs] : g.adj)
    for (const auto& [v, w] : nbrs) wmax = std::max(wmax, w);
  return n * (1.0 + wmax);
}

// Shortest-path distances from src to every node; unreachable nodes land on
// the sentinel above.
inline std::map<int, double> distances_from(const UGraph& g, int src,
                                            DistanceMode mode) {
  const double INF = std::numeric_limits<double>::infinity();
  std::map<int, double> dist;
  for (const auto& [n, nbrs] : g.adj) dist[n] = INF;
  if (g.adj.count(src)) {
    if (mode == DistanceMode::Hop) {
      std::queue<int> q;
      dist[src] = 0.0;
      q.push(src);
      while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (const auto& [v, w] : g.adj.at(u))
          if (dist[v] == INF) {
            dist[v] = dist[u] + 1.0;
            q.push(v);
          }
      }
    } else {
      using Item = std::pair<double, int>;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
      dist[src] = 0.0;
      pq.push({0.0, src});
      while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        for (const auto& [v, w] : g.adj.at(u)) {
          double nd = d + w;
          if (nd < dist[v]) {
            dist[v] = nd;
            pq.push({nd, v});
          }
        }
      }
    }
  }
  const double sentinel = unreachable_distance(g, mode);
  for (auto& [n, d] : dist)
    if (d == INF) d = sentinel;
  return dist;
}

// Exact optimal transport between two discrete measures given the full cost
// matrix, by successive shortest augmenting paths with potentials. Costs must
// be non-negative. Each augmentation saturates a supply or demand arc, so at
// most |a| + |b| rounds run.
inline double wasserstein1_matrix(const std::vector<double>& a,
                                  const std::vector<double>& b,
                                  const std::vector<std::vector<double>>& cost) {
  const int m = static_cast<int>(a.size());
  const int n = static_cast<int>(b.size());
  if (m == 0 || n == 0) throw std::invalid_argument("empty measure");
  const int S = 0, T = m + n + 1, N = m + n + 2;
  const double INF = std::numeric_limits<double>::infinity();
  const double EPS = 1e-12;

  struct Arc {
    int to;
    double cap;
    double cost;
    int rev;
  };
  std::vector<std::vector<Arc>> g(N);
  auto add_arc = [&](int u, int v, double cap, double c) {
    g[u].push_back({v, cap, c, static_cast<int>(g[v].size())});
    g[v].push_back({u, 0.0, -c, static_cast<int>(g[u].size()) - 1});
  };
  double supply = 0.0, demand = 0.0;
  for (int i = 0; i < m; ++i) {
    add_arc(S, 1 + i, a[i], 0.0);
    supply += a[i];
  }
  for (int j = 0; j < n; ++j) {
    add_arc(1 + m + j, T, b[j], 0.0);
    demand += b[j];
  }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      if (cost[i][j] < 0.0) throw std::invalid_argument("negative cost");
      add_arc(1 + i, 1 + m + j, INF, cost[i][j]);
    }

  double remaining = std::min(supply, demand);
  double total = 0.0;
  std::vector<double> pot(N, 0.0);
  while (remaining > EPS) {
    std::vector<double> dist(N, INF);
    std::vector<int> pv(N, -1), pe(N, -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[S] = 0.0;
    pq.push({0.0, S});
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d > dist[u] + EPS) continue;
      for (int k = 0; k < static_cast<int>(g[u].size()); ++k) {
        const Arc& arc = g[u][k];
        if (arc.cap <= EPS) continue;
        double nd = d + arc.cost + pot[u] - pot[arc.to];
        if (nd + EPS < dist[arc.to]) {
          dist[arc.to] = nd;
          pv[arc.to] = u;
          pe[arc.to] = k;
          pq.push({nd, arc.to});
        }
      }
    }
    if (dist[T] == INF) break;  // residual demand below numeric noise
    for (int v = 0; v < N; ++v)
      if (dist[v] < INF) pot[v] += dist[v];
    double push = remaining;
    for (int v = T; v != S; v = pv[v])
      push = std::min(push, g[pv[v]][pe[v]].cap);
    for (int v = T; v != S; v = pv[v]) {
      Arc& arc = g[pv[v]][pe[v]];
      arc.cap -= push;
      g[v][arc.rev].cap += push;
    }
    total += push * (pot[T] - pot[S]);
    remaining -= push;
  }
  return total;
}

// W1 between two neighbor measures with the ground distance taken from the
// current graph (hop count by default).
inline double wasserstein1(const NeighborMeasure& mu, const NeighborMeasure& nu,
                           const UGraph& g,
                           DistanceMode mode = DistanceMode::Hop) {
  std::vector<std::vector<double>> cost(mu.support.size());
  for (size_t i = 0; i < mu.support.size(); ++i) {
    auto dist = distances_from(g, mu.support[i], mode);
    cost[i].reserve(nu.support.size());
    for (int y : nu.support) cost[i].push_back(dist.at(y));
  }
  return wasserstein1_matrix(mu.mass, nu.mass, cost);
}

// kappa(u,v) = 1 - W1(m_u, m_v) / d(u,v). Adjacent nodes have d = 1 in hop
// mode; weighted mode divides by the weighted shortest-path distance.
inline double orc_edge(const UGraph& g, int u, int v,
                       DistanceMode mode = DistanceMode::Hop,
                       double idleness = 0.0) {
  if (!g.has_edge(u, v))
    throw std::invalid_argument("orc_edge on non-adjacent pair");
  double d = 1.0;
  if (mode == DistanceMode::Weighted) {
    d = distances_from(g, u, mode).at(v);
    if (d <= 0.0) throw std::runtime_error("degenerate ground distance");
  }
  auto mu = neighbor_measure(g, u, idleness);
  auto nu = neighbor_measure(g, v, idleness);
  return 1.0 - wasserstein1(mu, nu, g, mode) / d;
}

inline std::map<std::pair<int, int>, double> orc_all(
    const UGraph& g, DistanceMode mode = DistanceMode::Hop,
    double idleness = 0.0) {
  std::map<std::pair<int, int>, double> out;
  for (auto [u, v] : g.edges()) out[{u, v}] = orc_edge(g, u, v, mode, idleness);
  return out;
}

}  // namespace nocflow
