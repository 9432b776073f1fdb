#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "nocflow/curvature.hpp"
#include "oracles.hpp"

using namespace nocflow;

namespace {

UGraph make_graph(const std::vector<std::tuple<int, int, double>>& edges,
                  const std::vector<int>& extra_nodes = {}) {
  UGraph g;
  for (auto [u, v, w] : edges) {
    g.adj[u][v] += w;
    g.adj[v][u] += w;
  }
  for (int n : extra_nodes) g.adj[n];
  return g;
}

UGraph unit_graph(const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::tuple<int, int, double>> weighted;
  for (auto [u, v] : edges) weighted.emplace_back(u, v, 1.0);
  return make_graph(weighted);
}

// complete graph on the given nodes
std::vector<std::pair<int, int>> clique(const std::vector<int>& nodes) {
  std::vector<std::pair<int, int>> out;
  for (size_t i = 0; i < nodes.size(); ++i)
    for (size_t j = i + 1; j < nodes.size(); ++j)
      out.emplace_back(nodes[i], nodes[j]);
  return out;
}

}  // namespace

TEST_CASE("undirected view merges directions and drops self loops") {
  Ddg g;
  for (int i = 1; i <= 3; ++i) {
    DdgNode n;
    n.id = i;
    g.nodes.push_back(n);
  }
  g.edges.push_back({1, 2, 5.0, 40});
  g.edges.push_back({2, 1, 3.0, 24});  // opposite direction accumulates
  g.edges.push_back({2, 2, 9.0, 72});  // self loop ignored
  auto u = UGraph::from_ddg(g);
  CHECK(u.node_count() == 3);  // node 3 kept although isolated
  CHECK(u.edge_count() == 1);
  CHECK(u.weight(1, 2) == 8.0);
  CHECK(u.weight(2, 1) == 8.0);
}

TEST_CASE("neighbor measures are uniform and sorted") {
  auto g = unit_graph({{2, 7}, {2, 3}, {2, 5}});
  auto m = neighbor_measure(g, 2);
  CHECK(m.base == 2);
  CHECK(m.support == std::vector<int>{3, 5, 7});
  for (double x : m.mass) CHECK(x == Catch::Approx(1.0 / 3));

  auto lazy = neighbor_measure(g, 7, 0.5);
  CHECK(lazy.support == std::vector<int>{2, 7});  // self included when idle
  // node 7 has one neighbor: half the mass stays home
  REQUIRE(lazy.support[1] == 7);
  CHECK(lazy.mass[1] == Catch::Approx(0.5));
  CHECK(lazy.mass[0] == Catch::Approx(0.5));
}

TEST_CASE("neighbor measure rejects isolated nodes and bad idleness") {
  auto g = make_graph({{1, 2, 1.0}}, {9});
  CHECK_THROWS_AS(neighbor_measure(g, 9), std::invalid_argument);
  CHECK_THROWS_AS(neighbor_measure(g, 1, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(neighbor_measure(g, 1, 1.0), std::invalid_argument);
}

TEST_CASE("hop distances match an independent BFS, unreachable = node count") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 30; ++trial) {
    std::uniform_int_distribution<int> size(2, 9);
    int n = size(rng);
    std::uniform_int_distribution<int> coin(0, 99);
    std::vector<std::vector<int>> adj(static_cast<size_t>(n));
    UGraph g;
    for (int i = 0; i < n; ++i) g.adj[i];
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (coin(rng) < 35) {
          adj[static_cast<size_t>(u)].push_back(v);
          adj[static_cast<size_t>(v)].push_back(u);
          g.adj[u][v] = 1.0;
          g.adj[v][u] = 1.0;
        }
    for (int src = 0; src < n; ++src) {
      auto got = distances_from(g, src, DistanceMode::Hop);
      auto want = oracles::bfs_hops(adj, src, static_cast<double>(n));
      for (int v = 0; v < n; ++v)
        CHECK(got.at(v) == want[static_cast<size_t>(v)]);
    }
  }
}

TEST_CASE("weighted distances: Dijkstra spot values and sentinel") {
  // 1 -2- 2 -3- 3, plus direct 1-3 with weight 10 (not shortest)
  auto g = make_graph({{1, 2, 2.0}, {2, 3, 3.0}, {1, 3, 10.0}}, {4});
  auto d = distances_from(g, 1, DistanceMode::Weighted);
  CHECK(d.at(1) == 0.0);
  CHECK(d.at(2) == 2.0);
  CHECK(d.at(3) == 5.0);  // through node 2, not the direct edge
  // node 4 is unreachable: sentinel = |V| * (1 + max weight)
  CHECK(d.at(4) == 4.0 * (1.0 + 10.0));
  CHECK(unreachable_distance(g, DistanceMode::Weighted) == 44.0);
  CHECK(unreachable_distance(g, DistanceMode::Hop) == 4.0);
}

TEST_CASE("transport cost: hand cases") {
  // all mass in one place, one destination: cost = distance
  CHECK(wasserstein1_matrix({1.0}, {1.0}, {{3.0}}) == Catch::Approx(3.0));
  // two sources, two sinks, crossing is cheaper than staying
  double w = wasserstein1_matrix({0.5, 0.5}, {0.5, 0.5},
                                 {{2.0, 1.0}, {1.0, 2.0}});
  CHECK(w == Catch::Approx(1.0));  // both halves cross at cost 1
  // unbalanced split
  double w2 = wasserstein1_matrix({0.75, 0.25}, {0.5, 0.5},
                                  {{0.0, 1.0}, {1.0, 0.0}});
  CHECK(w2 == Catch::Approx(0.25));  // move the excess quarter
}

TEST_CASE("min-cost flow agrees with exhaustive plan enumeration") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> margin(1, 6);
  std::uniform_int_distribution<int> cost_d(0, 9);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<int> dim(1, 4);
    int r = dim(rng), c = dim(rng);
    std::vector<long long> rows(static_cast<size_t>(r)),
        cols(static_cast<size_t>(c));
    long long total = 0;
    for (auto& x : rows) {
      x = margin(rng);
      total += x;
    }
    // distribute the same total over the columns (zero columns allowed)
    long long left = total;
    for (size_t j = 0; j + 1 < cols.size(); ++j) {
      std::uniform_int_distribution<long long> part(0, left);
      cols[j] = part(rng);
      left -= cols[j];
    }
    cols.back() = left;

    std::vector<std::vector<double>> cost(static_cast<size_t>(r),
                                          std::vector<double>(static_cast<size_t>(c)));
    std::vector<double> a(static_cast<size_t>(r)), b(static_cast<size_t>(c));
    for (int i = 0; i < r; ++i) {
      a[static_cast<size_t>(i)] = static_cast<double>(rows[static_cast<size_t>(i)]);
      for (int j = 0; j < c; ++j)
        cost[static_cast<size_t>(i)][static_cast<size_t>(j)] =
            static_cast<double>(cost_d(rng));
    }
    for (int j = 0; j < c; ++j)
      b[static_cast<size_t>(j)] = static_cast<double>(cols[static_cast<size_t>(j)]);

    double mcmf = wasserstein1_matrix(a, b, cost);
    double brute = oracles::min_cost_transport(rows, cols, cost);
    CHECK_THAT(mcmf, Catch::Matchers::WithinAbs(brute, 1e-9));
  }
}

TEST_CASE("curvature ground truths: triangle, path, square, clique") {
  auto tri = unit_graph(clique({1, 2, 3}));
  for (auto [u, v] : tri.edges())
    CHECK_THAT(orc_edge(tri, u, v), Catch::Matchers::WithinAbs(0.5, 1e-12));

  auto path2 = unit_graph({{1, 2}});
  CHECK_THAT(orc_edge(path2, 1, 2), Catch::Matchers::WithinAbs(0.0, 1e-12));

  auto square = unit_graph({{1, 2}, {2, 3}, {3, 4}, {4, 1}});
  CHECK_THAT(orc_edge(square, 1, 2), Catch::Matchers::WithinAbs(0.0, 1e-12));

  auto k4 = unit_graph(clique({1, 2, 3, 4}));
  for (auto [u, v] : k4.edges())
    CHECK_THAT(orc_edge(k4, u, v),
               Catch::Matchers::WithinAbs(2.0 / 3.0, 1e-12));
}

TEST_CASE("the bridge between two cliques has the unique minimum curvature") {
  auto edges = clique({1, 2, 3, 4});
  auto right = clique({5, 6, 7, 8});
  edges.insert(edges.end(), right.begin(), right.end());
  edges.emplace_back(4, 5);  // bridge
  auto g = unit_graph(edges);

  auto all = orc_all(g);
  double bridge = all.at({4, 5});
  int strictly_above = 0;
  for (const auto& [e, kappa] : all)
    if (e != std::make_pair(4, 5)) {
      CHECK(kappa > bridge);
      ++strictly_above;
    }
  CHECK(strictly_above == static_cast<int>(all.size()) - 1);
  CHECK(bridge < 0.0);
}

TEST_CASE("W1 between neighbor measures matches the transport oracle") {
  std::mt19937_64 rng(555);
  std::uniform_int_distribution<int> coin(0, 99);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    std::uniform_int_distribution<int> size(3, 7);
    int n = size(rng);
    std::vector<std::vector<int>> adj(static_cast<size_t>(n));
    UGraph g;
    for (int i = 0; i < n; ++i) g.adj[i];
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (coin(rng) < 45) {
          adj[static_cast<size_t>(u)].push_back(v);
          adj[static_cast<size_t>(v)].push_back(u);
          g.adj[u][v] = 1.0;
          g.adj[v][u] = 1.0;
        }
    for (auto [u, v] : g.edges()) {
      if (g.degree(u) > 4 || g.degree(v) > 4) continue;
      double got = wasserstein1(neighbor_measure(g, u), neighbor_measure(g, v),
                                g, DistanceMode::Hop);
      double want =
          oracles::w1_uniform_neighbors(adj, u, v, static_cast<double>(n));
      CHECK_THAT(got, Catch::Matchers::WithinAbs(want, 1e-9));
      ++checked;
    }
  }
  CHECK(checked > 50);  // the sweep actually exercised many pairs
}

TEST_CASE("weighted-mode curvature: hand value and scale invariance") {
  // path 1 -(1)- 2 -(4)- 3: moving half of node 2's neighbor mass across the
  // heavy edge costs 2, so kappa(1,2) = 1 - 2.5/1
  auto g = make_graph({{1, 2, 1.0}, {2, 3, 4.0}});
  CHECK_THAT(orc_edge(g, 1, 2, DistanceMode::Weighted),
             Catch::Matchers::WithinAbs(-1.5, 1e-12));

  // uniform weight scaling cancels in W1/d
  auto scaled = make_graph({{1, 2, 3.0}, {2, 3, 12.0}});
  CHECK_THAT(orc_edge(scaled, 1, 2, DistanceMode::Weighted),
             Catch::Matchers::WithinAbs(-1.5, 1e-12));
}

TEST_CASE("orc_edge rejects non-adjacent pairs") {
  auto g = unit_graph({{1, 2}, {2, 3}});
  CHECK_THROWS_AS(orc_edge(g, 1, 3), std::invalid_argument);
}

TEST_CASE("removing an edge keeps both endpoints as nodes") {
  auto g = unit_graph({{1, 2}, {2, 3}});
  g.remove_edge(1, 2);
  CHECK(g.node_count() == 3);
  CHECK(g.edge_count() == 1);
  CHECK_FALSE(g.has_edge(1, 2));
}
