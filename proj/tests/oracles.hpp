#pragma once
// Independent reference implementations ("oracles") used to cross-check the
// library. Each oracle recomputes its answer from first principles with a
// different algorithm than the code under test: exhaustive enumeration,
// direct recursion, or dense linear algebra. None of them call the library
// routines they are meant to verify.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "nocflow/arch.hpp"
#include "nocflow/ddg.hpp"
#include "nocflow/task_graph.hpp"

namespace oracles {

// ---------------------------------------------------------------------------
// Plain BFS hop distances on an adjacency-set graph (for W1 ground costs).
// ---------------------------------------------------------------------------

// nodes are 0..n-1; adj[i] lists neighbors; unreachable pairs get `sentinel`.
inline std::vector<double> bfs_hops(const std::vector<std::vector<int>>& adj,
                                    int src, double sentinel) {
  std::vector<int> dist(adj.size(), -1);
  std::queue<int> q;
  dist[static_cast<size_t>(src)] = 0;
  q.push(src);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : adj[static_cast<size_t>(u)])
      if (dist[static_cast<size_t>(v)] < 0) {
        dist[static_cast<size_t>(v)] = dist[static_cast<size_t>(u)] + 1;
        q.push(v);
      }
  }
  std::vector<double> out(adj.size());
  for (size_t i = 0; i < adj.size(); ++i)
    out[i] = dist[i] < 0 ? sentinel : static_cast<double>(dist[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Exact W1 by exhaustive enumeration of integer transport plans.
// ---------------------------------------------------------------------------

namespace detail {

inline void enumerate_plans(const std::vector<long long>& row_margin,
                            std::vector<long long>& col_rem,
                            const std::vector<std::vector<double>>& cost,
                            size_t row, size_t col, long long row_rem,
                            double acc, double& best) {
  if (acc >= best) return;  // all costs are nonnegative
  if (row == row_margin.size()) {
    best = acc;  // margins guarantee col_rem is all zero here
    return;
  }
  if (col + 1 == col_rem.size()) {
    // last column of the row: the remainder is forced
    if (row_rem > col_rem[col]) return;
    col_rem[col] -= row_rem;
    double add = static_cast<double>(row_rem) * cost[row][col];
    size_t next_row = row + 1;
    long long next_rem = next_row < row_margin.size() ? row_margin[next_row] : 0;
    enumerate_plans(row_margin, col_rem, cost, next_row, 0, next_rem, acc + add,
                    best);
    col_rem[col] += row_rem;
    return;
  }
  long long later_cap = 0;
  for (size_t j = col + 1; j < col_rem.size(); ++j) later_cap += col_rem[j];
  long long lo = std::max<long long>(0, row_rem - later_cap);
  long long hi = std::min(row_rem, col_rem[col]);
  for (long long x = lo; x <= hi; ++x) {
    col_rem[col] -= x;
    enumerate_plans(row_margin, col_rem, cost, row, col + 1, row_rem - x,
                    acc + static_cast<double>(x) * cost[row][col], best);
    col_rem[col] += x;
  }
}

}  // namespace detail

// Minimum total cost of moving integer row margins onto integer column
// margins (sums must match). Every vertex of the transport polytope is an
// integer table, so the minimum over all integer tables is the LP optimum.
inline double min_cost_transport(const std::vector<long long>& rows,
                                 const std::vector<long long>& cols,
                                 const std::vector<std::vector<double>>& cost) {
  long long sr = std::accumulate(rows.begin(), rows.end(), 0LL);
  long long sc = std::accumulate(cols.begin(), cols.end(), 0LL);
  if (sr != sc) throw std::invalid_argument("margin sums differ");
  std::vector<long long> col_rem = cols;
  double best = std::numeric_limits<double>::infinity();
  detail::enumerate_plans(rows, col_rem, cost, 0, 0, rows.empty() ? 0 : rows[0],
                          0.0, best);
  return best;
}

// W1 between the uniform neighbor measures of two nodes of an undirected
// graph given as adjacency sets, using scaled integer margins
// (L = lcm(deg_u, deg_v)) and plan enumeration. `sentinel` is the distance
// assigned to unreachable pairs.
inline double w1_uniform_neighbors(const std::vector<std::vector<int>>& adj,
                                   int u, int v, double sentinel) {
  const auto& nu = adj[static_cast<size_t>(u)];
  const auto& nv = adj[static_cast<size_t>(v)];
  if (nu.empty() || nv.empty())
    throw std::invalid_argument("isolated endpoint");
  long long du = static_cast<long long>(nu.size());
  long long dv = static_cast<long long>(nv.size());
  long long l = std::lcm(du, dv);

  std::vector<long long> rows(nu.size(), l / du);
  std::vector<long long> cols(nv.size(), l / dv);
  std::vector<std::vector<double>> cost(nu.size(),
                                        std::vector<double>(nv.size()));
  for (size_t i = 0; i < nu.size(); ++i) {
    auto d = bfs_hops(adj, nu[i], sentinel);
    for (size_t j = 0; j < nv.size(); ++j)
      cost[i][j] = d[static_cast<size_t>(nv[j])];
  }
  return min_cost_transport(rows, cols, cost) / static_cast<double>(l);
}

// ---------------------------------------------------------------------------
// Placement: independent route energy and exhaustive per-round optimum.
// ---------------------------------------------------------------------------

inline double route_energy_per_bit(nocflow::Tile a, nocflow::Tile b,
                                   double e_s, double e_l) {
  int hops = std::abs(a.x - b.x) + std::abs(a.y - b.y);
  return static_cast<double>(hops + 1) * e_s + static_cast<double>(hops) * e_l;
}

// Total volume-weighted route energy of a full assignment, recomputed from
// coordinates alone.
inline double assignment_energy(
    const nocflow::TaskGraph& tg,
    const std::map<int, nocflow::Tile>& placement, double e_s, double e_l) {
  double total = 0.0;
  for (const auto& e : tg.edges) {
    auto f = placement.find(e.from);
    auto t = placement.find(e.to);
    if (f != placement.end() && t != placement.end())
      total += static_cast<double>(e.volume_bits) *
               route_energy_per_bit(f->second, t->second, e_s, e_l);
  }
  return total;
}

// Brute-force optimum for one placement round: try every injective assignment
// of `clusters` onto `tiles` on top of `base`, return the minimal objective.
inline double best_round_energy(const nocflow::TaskGraph& tg,
                                const std::vector<int>& clusters,
                                const std::vector<nocflow::Tile>& tiles,
                                const std::map<int, nocflow::Tile>& base,
                                double e_s, double e_l) {
  double best = std::numeric_limits<double>::infinity();
  // permutations of tile subsets: permute all tile indices, use the first k
  std::vector<size_t> chosen(clusters.size());
  std::vector<bool> used(tiles.size(), false);
  auto rec = [&](auto&& self, size_t pos) -> void {
    if (pos == clusters.size()) {
      std::map<int, nocflow::Tile> full = base;
      for (size_t i = 0; i < clusters.size(); ++i)
        full[clusters[i]] = tiles[chosen[i]];
      best = std::min(best, assignment_energy(tg, full, e_s, e_l));
      return;
    }
    for (size_t k = 0; k < tiles.size(); ++k) {
      if (used[k]) continue;
      used[k] = true;
      chosen[pos] = k;
      self(self, pos + 1);
      used[k] = false;
    }
  };
  rec(rec, 0);
  return best;
}

// ---------------------------------------------------------------------------
// Longest-path depths by plain recursion with memoization.
// ---------------------------------------------------------------------------

inline std::map<int, int> longest_path_depths(const nocflow::TaskGraph& tg) {
  std::map<int, std::vector<int>> preds;
  for (const auto& n : tg.nodes) preds[n.id];
  for (const auto& e : tg.edges) preds[e.to].push_back(e.from);
  std::map<int, int> memo;
  auto depth = [&](auto&& self, int id) -> int {
    auto it = memo.find(id);
    if (it != memo.end()) return it->second;
    int d = 0;
    for (int p : preds.at(id)) d = std::max(d, self(self, p) + 1);
    memo[id] = d;
    return d;
  };
  for (const auto& n : tg.nodes) depth(depth, n.id);
  return memo;
}

// ---------------------------------------------------------------------------
// Contention-free timeline by direct recursion (no event queue).
// ---------------------------------------------------------------------------

struct NoContentionResult {
  std::map<int, std::int64_t> start_ns;
  std::map<int, std::int64_t> finish_ns;
  std::int64_t makespan_ns = 0;
};

// Mirrors the send model analytically: a cluster's packets depart in
// ascending destination id, serialized at the source network interface
// (flit count x flit cycle apart); each arrives after the route's head
// latency plus (flits-1) flit cycles; a cluster starts at its last arrival.
inline NoContentionResult no_contention_timeline(
    const nocflow::TaskGraph& tg,
    const std::map<int, nocflow::Tile>& placement,
    const nocflow::NocParams& p) {
  std::map<int, std::vector<const nocflow::TaskEdge*>> outgoing;
  std::map<int, std::vector<int>> preds;
  for (const auto& n : tg.nodes) {
    outgoing[n.id];
    preds[n.id];
  }
  for (const auto& e : tg.edges) {
    outgoing[e.from].push_back(&e);
    preds[e.to].push_back(e.from);
  }
  for (auto& [c, v] : outgoing)
    std::stable_sort(v.begin(), v.end(),
                     [](const nocflow::TaskEdge* a, const nocflow::TaskEdge* b) {
                       return a->to < b->to;
                     });

  NoContentionResult r;
  std::map<int, std::map<int, std::int64_t>> arrival;  // dst -> src -> tail
  auto finish_of = [&](auto&& self, int c) -> std::int64_t {
    auto it = r.finish_ns.find(c);
    if (it != r.finish_ns.end()) return it->second;
    std::int64_t start = 0;
    for (int pred : preds.at(c)) {
      self(self, pred);  // ensures arrival[c][pred] is filled
      start = std::max(start, arrival.at(c).at(pred));
    }
    r.start_ns[c] = start;
    std::int64_t fin = start + tg.node(c).exec_ns;
    r.finish_ns[c] = fin;
    std::int64_t depart = fin;
    for (const nocflow::TaskEdge* e : outgoing.at(c)) {
      std::int64_t flits =
          (e->volume_bits + p.flit_size_bits - 1) / p.flit_size_bits;
      nocflow::Tile a = placement.at(e->from);
      nocflow::Tile b = placement.at(e->to);
      int eta = std::abs(a.x - b.x) + std::abs(a.y - b.y) + 1;
      std::int64_t head =
          depart + static_cast<std::int64_t>(eta) * p.t_s +
          static_cast<std::int64_t>(eta - 1) * p.t_l;
      std::int64_t tail = head + (flits - 1) * p.flit_cycle;
      arrival[e->to][c] = tail;
      r.makespan_ns = std::max(r.makespan_ns, tail);
      depart += flits * p.flit_cycle;
    }
    r.makespan_ns = std::max(r.makespan_ns, fin);
    return fin;
  };
  for (const auto& n : tg.nodes) finish_of(finish_of, n.id);
  return r;
}

// ---------------------------------------------------------------------------
// Dense 4x4 linear solve (Gaussian elimination with partial pivoting).
// ---------------------------------------------------------------------------

inline std::array<double, 4> solve4(std::array<std::array<double, 4>, 4> m,
                                    std::array<double, 4> rhs) {
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (std::abs(m[piv][col]) < 1e-300)
      throw std::invalid_argument("singular matrix");
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    for (int r = 0; r < 4; ++r) {
      if (r == col) continue;
      double f = m[r][col] / m[col][col];
      for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  std::array<double, 4> x{};
  for (int i = 0; i < 4; ++i) x[i] = rhs[i] / m[i][i];
  return x;
}

// ---------------------------------------------------------------------------
// Seeded random structures for property tests.
// ---------------------------------------------------------------------------

// Random DAG-shaped DDG: edges only point from lower to higher ids, weights
// and bit counts are positive integers, node energies positive.
inline nocflow::Ddg random_ddg(std::mt19937_64& rng, int max_nodes) {
  std::uniform_int_distribution<int> node_count(2, max_nodes);
  int n = node_count(rng);
  std::uniform_real_distribution<double> energy(1e-13, 9e-12);
  std::uniform_int_distribution<int> weight(1, 40);
  std::uniform_int_distribution<int> coin(0, 99);

  nocflow::Ddg g;
  for (int i = 1; i <= n; ++i) {
    nocflow::DdgNode node;
    node.id = i;
    node.opcode = nocflow::Opcode::FAdd;
    node.group = nocflow::Group::G;
    node.energy_j = energy(rng);
    node.latency = 1;
    node.data_size = 4;
    g.nodes.push_back(node);
  }
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v)
      if (coin(rng) < 30) {
        nocflow::DdgEdge e;
        e.from = u;
        e.to = v;
        e.weight = static_cast<double>(weight(rng));
        e.bits = static_cast<std::int64_t>(e.weight) * 8;
        g.edges.push_back(e);
      }
  return g;
}

// Random assignment of the graph's nodes into k buckets (all buckets hit at
// least once when possible).
inline nocflow::NodePartition random_partition(std::mt19937_64& rng,
                                               const nocflow::Ddg& g, int k) {
  nocflow::NodePartition part;
  std::uniform_int_distribution<int> bucket(0, k - 1);
  int i = 0;
  for (const auto& n : g.nodes) {
    part[n.id] = i < k ? i : bucket(rng);  // first k nodes seed each bucket
    ++i;
  }
  return part;
}

// Random connected DAG task graph for simulator property tests.
inline nocflow::TaskGraph random_task_graph(std::mt19937_64& rng,
                                            int max_nodes,
                                            std::int64_t max_volume) {
  std::uniform_int_distribution<int> node_count(2, max_nodes);
  int n = node_count(rng);
  std::uniform_int_distribution<std::int64_t> volume(1, max_volume);
  std::uniform_int_distribution<std::int64_t> exec(1, 30);
  std::uniform_int_distribution<int> coin(0, 99);

  nocflow::TaskGraph tg;
  for (int i = 0; i < n; ++i)
    tg.nodes.push_back({i, 1e-12, exec(rng)});
  for (int v = 1; v < n; ++v) {
    // guarantee connectivity: at least one inbound edge from a lower id
    std::uniform_int_distribution<int> pick(0, v - 1);
    int u = pick(rng);
    tg.edges.push_back({u, v, volume(rng), 0.0});
    for (int w = 0; w < v; ++w)
      if (w != u && coin(rng) < 25)
        tg.edges.push_back({w, v, volume(rng), 0.0});
  }
  std::sort(tg.edges.begin(), tg.edges.end(),
            [](const nocflow::TaskEdge& a, const nocflow::TaskEdge& b) {
              return std::tie(a.from, a.to) < std::tie(b.from, b.to);
            });
  return tg;
}

}  // namespace oracles
