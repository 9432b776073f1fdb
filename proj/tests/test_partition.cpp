#include <catch2/catch_amalgamated.hpp>

#include "nocflow/partition.hpp"
#include "oracles.hpp"

using namespace nocflow;

namespace {

// Ddg with unit-latency G-group nodes and the given weighted edges.
Ddg make_ddg(int node_count,
             const std::vector<std::tuple<int, int, double>>& edges,
             double node_energy = 1e-12) {
  Ddg g;
  for (int i = 1; i <= node_count; ++i) {
    DdgNode n;
    n.id = i;
    n.opcode = Opcode::FAdd;
    n.group = Group::G;
    n.energy_j = node_energy;
    n.latency = 1;
    n.data_size = 8;
    g.nodes.push_back(n);
  }
  for (auto [u, v, w] : edges)
    g.edges.push_back({u, v, w, static_cast<std::int64_t>(w) * 8});
  return g;
}

std::vector<std::tuple<int, int, double>> clique_edges(
    const std::vector<int>& nodes, double w = 1.0) {
  std::vector<std::tuple<int, int, double>> out;
  for (size_t i = 0; i < nodes.size(); ++i)
    for (size_t j = i + 1; j < nodes.size(); ++j)
      out.emplace_back(nodes[i], nodes[j], w);
  return out;
}

Ddg two_cliques_bridge() {
  auto edges = clique_edges({1, 2, 3, 4});
  auto right = clique_edges({5, 6, 7, 8});
  edges.insert(edges.end(), right.begin(), right.end());
  edges.emplace_back(4, 5, 1.0);
  return make_ddg(8, edges);
}

}  // namespace

TEST_CASE("negative-curvature pruning removes exactly the clique bridge") {
  auto u = UGraph::from_ddg(two_cliques_bridge());
  auto pruned = remove_negative_loop(u);
  REQUIRE(pruned.removed.size() == 1);
  CHECK(pruned.removed[0].edge == std::make_pair(4, 5));
  CHECK(pruned.removed[0].curvature < 0.0);
  CHECK_FALSE(pruned.graph.has_edge(4, 5));

  auto comps = connected_components(pruned.graph);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0] == std::vector<int>{1, 2, 3, 4});
  CHECK(comps[1] == std::vector<int>{5, 6, 7, 8});
}

TEST_CASE("connected components are sorted inside and across") {
  UGraph g;
  g.adj[9];
  g.adj[3][7] = 1.0;
  g.adj[7][3] = 1.0;
  g.adj[1][5] = 1.0;
  g.adj[5][1] = 1.0;
  auto comps = connected_components(g);
  REQUIRE(comps.size() == 3);
  CHECK(comps[0] == std::vector<int>{1, 5});
  CHECK(comps[1] == std::vector<int>{3, 7});
  CHECK(comps[2] == std::vector<int>{9});
}

TEST_CASE("singleton attaches to the community it talks to") {
  // components {1,2,3}, {4,5,6}, {7}; node 7's only original edge goes into
  // the first community, so with target 2 it must merge there
  auto edges = clique_edges({1, 2, 3});
  auto right = clique_edges({4, 5, 6});
  edges.insert(edges.end(), right.begin(), right.end());
  edges.emplace_back(7, 1, 1.0);
  auto original = UGraph::from_ddg(make_ddg(7, edges));

  std::vector<std::vector<int>> comps{{1, 2, 3}, {4, 5, 6}, {7}};
  auto merged = preferential_attachment(comps, original, 2, 1);
  REQUIRE(merged.size() == 2);
  CHECK(merged[0] == std::vector<int>{1, 2, 3, 7});
  CHECK(merged[1] == std::vector<int>{4, 5, 6});
}

TEST_CASE("attachment ties resolve to the lowest community id") {
  // node 5 is equally attached to {1,2} and {3,4}
  auto original = UGraph::from_ddg(make_ddg(
      5, {{1, 2, 1.0}, {3, 4, 1.0}, {5, 1, 2.0}, {5, 3, 2.0}}));
  std::vector<std::vector<int>> comps{{1, 2}, {3, 4}, {5}};
  auto merged = preferential_attachment(comps, original, 2, 1);
  REQUIRE(merged.size() == 2);
  CHECK(merged[0] == std::vector<int>{1, 2, 5});
}

TEST_CASE("undersized communities merge even when the target is met") {
  auto original = UGraph::from_ddg(make_ddg(
      5, {{2, 3, 1.0}, {4, 5, 1.0}, {1, 2, 3.0}}));
  std::vector<std::vector<int>> comps{{1}, {2, 3}, {4, 5}};
  // target 3 is already met, but min_size 2 forces {1} into {2,3}
  auto merged = preferential_attachment(comps, original, 3, 2);
  REQUIRE(merged.size() == 2);
  CHECK(merged[0] == std::vector<int>{1, 2, 3});
  CHECK(merged[1] == std::vector<int>{4, 5});
}

TEST_CASE("attachment validates the target") {
  auto original = UGraph::from_ddg(make_ddg(2, {{1, 2, 1.0}}));
  std::vector<std::vector<int>> comps{{1}, {2}};
  CHECK_THROWS_AS(preferential_attachment(comps, original, 0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(preferential_attachment(comps, original, 3, 1),
                  std::invalid_argument);
}

TEST_CASE("estimated link energy uses the mesh's mean route cost") {
  PartitionOptions opts;  // 2x2 mesh, 1e-12 J/bit defaults
  // mean router count on 2x2 = 0.5 + 0.5 + 1 = 2
  // weight 16 -> 128 bits -> 128 * (2*1e-12 + 1*1e-12)
  CHECK_THAT(estimated_link_energy(16.0, opts),
             Catch::Matchers::WithinRel(384e-12, 1e-12));
  CHECK(estimated_link_energy(0.0, opts) == 0.0);
}

TEST_CASE("quality: hand-computed two-cluster value") {
  // edges 1->2 (16), 1->3 (8), 2->3 (8); energies 1e-12 each
  auto g = make_ddg(3, {{1, 2, 16.0}, {1, 3, 8.0}, {2, 3, 8.0}});
  NodePartition part{{1, 0}, {2, 0}, {3, 1}};
  auto stats = cluster_stats(g, part);
  PartitionOptions opts;
  auto est = estimate_energy(g, part, stats, opts);

  // structural terms: cluster 0 gives 0 - 64/32, cluster 1 gives -16/32 - 64/32
  // energy term: (3e-12 + 384e-12) / (3e-12 + 768e-12) = 129/257
  double expected = -4.5 - 129.0 / 257.0;
  CHECK_THAT(quality(stats, est), Catch::Matchers::WithinAbs(expected, 1e-12));
}

TEST_CASE("quality: single cluster reduces to one minus the energy ratio") {
  auto g = make_ddg(3, {{1, 2, 16.0}, {1, 3, 8.0}, {2, 3, 8.0}});
  NodePartition part{{1, 0}, {2, 0}, {3, 0}};
  auto stats = cluster_stats(g, part);
  PartitionOptions opts;
  auto est = estimate_energy(g, part, stats, opts);
  // cut = 0 so the link term vanishes: Q = 1 - sum(E_N)/E = 1 - 1/257
  CHECK_THAT(quality(stats, est),
             Catch::Matchers::WithinAbs(1.0 - 1.0 / 257.0, 1e-12));
}

TEST_CASE("quality: edgeless graphs score the pure energy penalty") {
  auto g = make_ddg(2, {});
  NodePartition part{{1, 0}, {2, 1}};
  auto stats = cluster_stats(g, part);
  auto est = estimate_energy(g, part, stats, PartitionOptions{});
  // W = 0: structural terms are defined as zero; E = node energy only
  CHECK_THAT(quality(stats, est), Catch::Matchers::WithinAbs(-1.0, 1e-12));
}

TEST_CASE("quality rejects a non-positive normalizer") {
  auto g = make_ddg(2, {}, 0.0);  // zero node energy, no edges
  NodePartition part{{1, 0}, {2, 0}};
  auto stats = cluster_stats(g, part);
  auto est = estimate_energy(g, part, stats, PartitionOptions{});
  CHECK_THROWS_AS(quality(stats, est), std::invalid_argument);
}

TEST_CASE("community discovery recovers the two cliques") {
  auto g = two_cliques_bridge();
  auto p = discover_communities(g, 2);
  CHECK(p.n_c == 2);
  CHECK(p.inter_cluster_weight == 1.0);  // only the bridge is cut
  for (int n = 1; n <= 4; ++n) CHECK(p.assignment.at(n) == p.assignment.at(1));
  for (int n = 5; n <= 8; ++n) CHECK(p.assignment.at(n) == p.assignment.at(5));
  CHECK(p.assignment.at(1) != p.assignment.at(5));
  REQUIRE(p.candidates.size() == 1);  // counts: only 2
  CHECK(p.candidates[0].requested_count == 2);
}

TEST_CASE("candidate counts cover 2..min(cores, nodes)") {
  auto g = two_cliques_bridge();
  auto p = discover_communities(g, 4);
  REQUIRE(p.candidates.size() == 3);  // counts 2, 3, 4
  CHECK(p.candidates[0].requested_count == 2);
  CHECK(p.candidates[2].requested_count == 4);
  // pruning yields two components; attachment cannot split, so every
  // candidate still has two communities
  for (const auto& c : p.candidates) CHECK(c.n_c == 2);
}

TEST_CASE("selection rules pick their own optimum over the candidates") {
  // chain of three triangles: candidates with 2 and 3 communities differ
  auto edges = clique_edges({1, 2, 3});
  auto mid = clique_edges({4, 5, 6});
  auto right = clique_edges({7, 8, 9});
  edges.insert(edges.end(), mid.begin(), mid.end());
  edges.insert(edges.end(), right.begin(), right.end());
  edges.emplace_back(3, 4, 1.0);
  edges.emplace_back(6, 7, 1.0);
  auto g = make_ddg(9, edges);

  PartitionOptions min_cut;
  auto a = discover_communities(g, 3, min_cut);
  double least = a.candidates.front().inter_cluster_weight;
  for (const auto& c : a.candidates)
    least = std::min(least, c.inter_cluster_weight);
  CHECK(a.inter_cluster_weight == least);

  PartitionOptions max_q;
  max_q.selection = PartitionOptions::Selection::MaxQ;
  auto b = discover_communities(g, 3, max_q);
  double best_q = b.candidates.front().q;
  for (const auto& c : b.candidates) best_q = std::max(best_q, c.q);
  CHECK(b.q == best_q);
}

TEST_CASE("uniform weight scaling does not change the chosen partition") {
  auto g = two_cliques_bridge();
  auto base = discover_communities(g, 4);

  auto scaled = g;
  for (auto& e : scaled.edges) e.weight *= 10.0;
  auto p = discover_communities(scaled, 4);
  CHECK(p.assignment == base.assignment);
  CHECK(p.inter_cluster_weight == 10.0 * base.inter_cluster_weight);
}

TEST_CASE("discovery validates inputs") {
  Ddg empty;
  CHECK_THROWS_AS(discover_communities(empty, 2), std::invalid_argument);
  auto g = two_cliques_bridge();
  CHECK_THROWS_AS(discover_communities(g, 1), std::invalid_argument);
}
