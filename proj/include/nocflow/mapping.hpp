#pragma once
// Cluster-to-tile placement. Depth-ordered mapping places clusters level by
// level, minimizing volume-weighted route energy against everything already
// placed; the volume-greedy baseline ignores execution order entirely. Unused
// tiles are power-gated.

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "nocflow/arch.hpp"
#include "nocflow/task_graph.hpp"

namespace nocflow {

struct Mapping {
  std::map<int, Tile> placement;  // cluster id -> tile
  std::vector<Tile> gated;        // unused tiles, ascending index
  std::string algorithm;
};

// Sum of volume x per-bit route energy over edges whose endpoints are both
// placed; the objective shared by both placement strategies.
inline double placement_comm_energy(const TaskGraph& tg, const ArchGraph& ag,
                                    const std::map<int, Tile>& placement) {
  double e = 0.0;
  for (const auto& edge : tg.edges) {
    auto f = placement.find(edge.from);
    auto t = placement.find(edge.to);
    if (f != placement.end() && t != placement.end())
      e += static_cast<double>(edge.volume_bits) *
           energy_per_bit(ag, f->second, t->second);
  }
  return e;
}

namespace detail {

inline void fill_gated(const ArchGraph& ag, Mapping& m) {
  std::vector<bool> used(static_cast<size_t>(ag.tile_count()), false);
  for (const auto& [c, t] : m.placement) used[static_cast<size_t>(ag.tile_index(t))] = true;
  for (int i = 0; i < ag.tile_count(); ++i)
    if (!used[static_cast<size_t>(i)]) m.gated.push_back(ag.tile_at(i));
}

inline std::vector<int> free_tiles(const ArchGraph& ag,
                                   const std::map<int, Tile>& placement) {
  std::vector<bool> used(static_cast<size_t>(ag.tile_count()), false);
  for (const auto& [c, t] : placement) used[static_cast<size_t>(ag.tile_index(t))] = true;
  std::vector<int> out;
  for (int i = 0; i < ag.tile_count(); ++i)
    if (!used[static_cast<size_t>(i)]) out.push_back(i);
  return out;
}

inline std::map<int, double> incident_volume(const TaskGraph& tg) {
  std::map<int, double> vol;
  for (const auto& n : tg.nodes) vol[n.id] = 0.0;
  for (const auto& e : tg.edges) {
    vol[e.from] += static_cast<double>(e.volume_bits);
    vol[e.to] += static_cast<double>(e.volume_bits);
  }
  return vol;
}

// Places one round of clusters (ascending id) onto the free tiles, minimizing
// the communication energy of all edges whose endpoints are then placed.
// Exhaustive search while the assignment count stays small; greedy insertion
// in descending incident-volume order beyond that. Ties always resolve to the
// lexicographically smallest tile-index tuple.
inline void place_round(const TaskGraph& tg, const ArchGraph& ag,
                        const std::vector<int>& clusters,
                        std::map<int, Tile>& placement) {
  if (clusters.empty()) return;
  auto avail = free_tiles(ag, placement);
  if (clusters.size() > avail.size())
    throw std::invalid_argument("more clusters than tiles");

  double assignments = 1.0;
  for (size_t i = 0; i < clusters.size(); ++i)
    assignments *= static_cast<double>(avail.size() - i);

  if (assignments <= 1e6) {
    std::vector<int> current(clusters.size(), -1), best;
    std::vector<bool> taken(avail.size(), false);
    double best_energy = 0.0;
    bool have_best = false;

    auto recurse = [&](auto&& self, size_t pos) -> void {
      if (pos == clusters.size()) {
        std::map<int, Tile> trial = placement;
        for (size_t i = 0; i < clusters.size(); ++i)
          trial[clusters[i]] = ag.tile_at(current[i]);
        double e = placement_comm_energy(tg, ag, trial);
        if (!have_best || e < best_energy) {
          have_best = true;
          best_energy = e;
          best = current;
        }
        return;  // first minimum found is lexicographically smallest
      }
      for (size_t k = 0; k < avail.size(); ++k) {
        if (taken[k]) continue;
        taken[k] = true;
        current[pos] = avail[k];
        self(self, pos + 1);
        taken[k] = false;
      }
    };
    recurse(recurse, 0);
    for (size_t i = 0; i < clusters.size(); ++i)
      placement[clusters[i]] = ag.tile_at(best[i]);
  } else {
    auto vol = incident_volume(tg);
    std::vector<int> order = clusters;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (vol[a] != vol[b]) return vol[a] > vol[b];
      return a < b;
    });
    for (int c : order) {
      auto free_now = free_tiles(ag, placement);
      int best_tile = free_now.front();
      double best_energy = 0.0;
      bool first = true;
      for (int t : free_now) {
        std::map<int, Tile> trial = placement;
        trial[c] = ag.tile_at(t);
        double e = placement_comm_energy(tg, ag, trial);
        if (first || e < best_energy) {
          first = false;
          best_energy = e;
          best_tile = t;
        }
      }
      placement[c] = ag.tile_at(best_tile);
    }
  }
}

}  // namespace detail

// Depth-ordered placement: the root with the largest outgoing volume anchors at
// (0,0); every later depth level is placed as one round against everything
// already placed. Remaining roots (multi-root graphs) join the first round.
inline Mapping cdm_map(const TaskGraph& tg, const ArchGraph& ag) {
  if (static_cast<int>(tg.nodes.size()) > ag.tile_count())
    throw std::invalid_argument("more clusters than tiles");
  auto depth = depth_assign(tg);

  std::map<int, std::vector<int>> rounds;
  std::vector<int> roots;
  for (const auto& n : tg.nodes) {
    int d = depth.at(n.id);
    if (d == 0)
      roots.push_back(n.id);
    else
      rounds[d].push_back(n.id);
  }

  std::map<int, double> outgoing;
  for (const auto& n : tg.nodes) outgoing[n.id] = 0.0;
  for (const auto& e : tg.edges) outgoing[e.from] += static_cast<double>(e.volume_bits);
  int primary = roots.front();
  for (int r : roots)
    if (outgoing[r] > outgoing[primary]) primary = r;

  Mapping m;
  m.algorithm = "cdm";
  m.placement[primary] = ag.tile_at(0);
  for (int r : roots)
    if (r != primary) rounds[1].push_back(r);
  for (auto& [d, clusters] : rounds) {
    std::sort(clusters.begin(), clusters.end());
    detail::place_round(tg, ag, clusters, m.placement);
  }
  detail::fill_gated(ag, m);
  return m;
}

// Volume-greedy baseline: clusters in descending total incident volume take
// the free tile with the lowest communication energy to everything already
// placed; execution depth is deliberately ignored.
inline Mapping cwm_map(const TaskGraph& tg, const ArchGraph& ag) {
  if (static_cast<int>(tg.nodes.size()) > ag.tile_count())
    throw std::invalid_argument("more clusters than tiles");
  auto vol = detail::incident_volume(tg);
  std::vector<int> order;
  for (const auto& n : tg.nodes) order.push_back(n.id);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (vol[a] != vol[b]) return vol[a] > vol[b];
    return a < b;
  });

  Mapping m;
  m.algorithm = "cwm";
  for (int c : order) {
    auto free_now = detail::free_tiles(ag, m.placement);
    int best_tile = free_now.front();
    double best_energy = 0.0;
    bool first = true;
    for (int t : free_now) {
      std::map<int, Tile> trial = m.placement;
      trial[c] = ag.tile_at(t);
      double e = placement_comm_energy(tg, ag, trial);
      if (first || e < best_energy) {
        first = false;
        best_energy = e;
        best_tile = t;
      }
    }
    m.placement[c] = ag.tile_at(best_tile);
  }
  detail::fill_gated(ag, m);
  return m;
}

}  // namespace nocflow
