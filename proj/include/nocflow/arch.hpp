#pragma once
// 2D-mesh architecture graph: tiles, deterministic XY routes, per-bit route
// energies, and the timing/energy parameters shared by mapping and simulation.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace nocflow {

struct Tile {
  int x = 0;
  int y = 0;

  bool operator==(const Tile&) const = default;
  auto operator<=>(const Tile&) const = default;
};

struct NocParams {
  double e_s_bit = 1e-12;   // J/bit per router traversal
  double e_l_bit = 1e-12;   // J/bit per link traversal
  double p_st = 1e-12;      // J per bit per ns parked in a buffer
  std::int64_t t_s = 2;     // ns per router (switch) hop
  std::int64_t t_l = 1;     // ns per link hop
  std::int64_t flit_cycle = 1;     // ns between consecutive flits
  std::int64_t flit_size_bits = 1; // bits per flit
};

// Directed mesh link from one tile to an adjacent tile.
struct Link {
  Tile from;
  Tile to;

  bool operator==(const Link&) const = default;
  auto operator<=>(const Link&) const = default;
};

struct Route {
  int routers = 1;          // eta: tiles/routers visited, >= 1
  std::vector<Link> links;  // eta - 1 directed hops, X first then Y
};

struct ArchGraph {
  int a = 1;  // tiles along x
  int b = 1;  // tiles along y
  NocParams params;

  int tile_count() const { return a * b; }

  // Row-major identity of a tile: enumerates (0,0), (0,1), ..., (1,0), ...
  int tile_index(Tile t) const { return t.x * b + t.y; }

  Tile tile_at(int index) const { return {index / b, index % b}; }

  bool contains(Tile t) const {
    return t.x >= 0 && t.x < a && t.y >= 0 && t.y < b;
  }

  void check(Tile t) const {
    if (!contains(t))
      throw std::out_of_range("tile (" + std::to_string(t.x) + "," +
                              std::to_string(t.y) + ") off the " +
                              std::to_string(a) + "x" + std::to_string(b) +
                              " mesh");
  }
};

// Dimension-ordered route: all X hops first, then Y hops.
inline Route xy_route(const ArchGraph& ag, Tile src, Tile dst) {
  ag.check(src);
  ag.check(dst);
  Route r;
  Tile cur = src;
  int step_x = dst.x > cur.x ? 1 : -1;
  while (cur.x != dst.x) {
    Tile next{cur.x + step_x, cur.y};
    r.links.push_back({cur, next});
    cur = next;
  }
  int step_y = dst.y > cur.y ? 1 : -1;
  while (cur.y != dst.y) {
    Tile next{cur.x, cur.y + step_y};
    r.links.push_back({cur, next});
    cur = next;
  }
  r.routers = static_cast<int>(r.links.size()) + 1;
  return r;
}

inline int router_count(Tile src, Tile dst) {
  return std::abs(src.x - dst.x) + std::abs(src.y - dst.y) + 1;
}

// Energy to move one bit from src to dst: every router on the route costs
// e_s_bit and every link e_l_bit.
inline double energy_per_bit(const ArchGraph& ag, Tile src, Tile dst) {
  int eta = router_count(src, dst);
  return static_cast<double>(eta) * ag.params.e_s_bit +
         static_cast<double>(eta - 1) * ag.params.e_l_bit;
}

// Head-flit delivery latency over a route of eta routers.
inline std::int64_t head_latency_ns(const NocParams& p, int eta) {
  return static_cast<std::int64_t>(eta) * p.t_s +
         static_cast<std::int64_t>(eta - 1) * p.t_l;
}

// Mean |dx| between two independent uniform picks from 0..n-1, including equal
// picks; closed form (n^2 - 1) / (3n).
inline double mean_axis_distance(int n) {
  if (n <= 1) return 0.0;
  double nn = static_cast<double>(n);
  return (nn * nn - 1.0) / (3.0 * nn);
}

// Expected router count between two uniformly random tiles (self pairs
// included): mean Manhattan distance plus one.
inline double mean_router_count(int a, int b) {
  return mean_axis_distance(a) + mean_axis_distance(b) + 1.0;
}

}  // namespace nocflow
