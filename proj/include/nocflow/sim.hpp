#pragma once
// Discrete-event wormhole simulation of a mapped task graph on the mesh.
// Contention model: a packet holds every directed link of its XY route plus
// the destination tile's delivery port from head injection until tail
// delivery; acquisition is all-or-nothing, so a blocked packet holds nothing.
// A source emits its packets in order through one network interface: the next
// packet may attempt injection once the previous packet's flits have left the
// interface. Blocked packets are granted in first-blocked order on every
// release, later arrivals bypassing only when their whole resource set is
// free. All times are integer nanoseconds.

#include <algorithm>
#include <cstdint>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "nocflow/arch.hpp"
#include "nocflow/mapping.hpp"
#include "nocflow/task_graph.hpp"

namespace nocflow {

struct SimOptions {
  enum class SendOrder { DestId, EdgeOrder };
  SendOrder send_order = SendOrder::DestId;
  bool contention = true;
};

struct Packet {
  int id = 0;
  int src = 0;
  int dst = 0;
  std::int64_t bits = 0;
  std::int64_t flits = 0;
  Route route;
  std::int64_t first_attempt_ns = -1;
  std::int64_t inject_ns = -1;
  std::int64_t head_ns = -1;
  std::int64_t tail_ns = -1;
};

struct CongestionEvent {
  int packet_id = 0;
  int src = 0;
  int dst = 0;
  std::int64_t begin_ns = 0;    // when the packet first found the route busy
  std::int64_t blocked_ns = 0;  // total wait until injection
  std::int64_t bits = 0;        // the blocked packet's full size
  Tile location;                // input port that refused the head
};

struct Timeline {
  std::map<int, std::int64_t> start_ns;
  std::map<int, std::int64_t> finish_ns;
  std::vector<Packet> packets;  // by packet id
  std::vector<CongestionEvent> events;
  std::int64_t makespan_ns = 0;
};

namespace detail {

// A holdable resource: one directed mesh link, or one delivery port.
struct ResKey {
  int kind = 0;  // 0 = link, 1 = delivery port
  int a = 0;     // link: from-tile index; port: tile index
  int b = 0;     // link: to-tile index

  auto operator<=>(const ResKey&) const = default;
};

// The tile whose input the resource feeds; where blocked data is parked.
inline Tile resource_tile(const ArchGraph& ag, const ResKey& r) {
  return r.kind == 0 ? ag.tile_at(r.b) : ag.tile_at(r.a);
}

}  // namespace detail

// Runs the event loop. Every cluster starts when all inbound tails have
// arrived (roots at 0), executes for its execution time, then emits packets
// in the configured order. Disabling contention removes all blocking but
// keeps per-source emission serialization.
inline Timeline simulate(const TaskGraph& tg, const Mapping& mapping,
                         const ArchGraph& ag, const SimOptions& opts = {}) {
  for (const auto& n : tg.nodes)
    if (!mapping.placement.count(n.id))
      throw std::invalid_argument("cluster " + std::to_string(n.id) +
                                  " is not placed");
  for (const auto& e : tg.edges)
    if (e.volume_bits <= 0)
      throw std::invalid_argument("zero-size packet on edge " +
                                  std::to_string(e.from) + "->" +
                                  std::to_string(e.to));

  const NocParams& p = ag.params;
  Timeline tl;

  // Build packets grouped by source, in emission order.
  std::map<int, std::vector<int>> sends;  // src cluster -> packet ids in order
  {
    std::map<int, std::vector<TaskEdge>> by_src;
    for (const auto& e : tg.edges) by_src[e.from].push_back(e);
    for (auto& [src, edges] : by_src) {
      if (opts.send_order == SimOptions::SendOrder::DestId)
        std::stable_sort(edges.begin(), edges.end(),
                         [](const TaskEdge& a, const TaskEdge& b) {
                           return a.to < b.to;
                         });
      for (const auto& e : edges) {
        Packet pk;
        pk.id = static_cast<int>(tl.packets.size());
        pk.src = e.from;
        pk.dst = e.to;
        pk.bits = e.volume_bits;
        pk.flits = (e.volume_bits + p.flit_size_bits - 1) / p.flit_size_bits;
        pk.route = xy_route(ag, mapping.placement.at(e.from),
                            mapping.placement.at(e.to));
        sends[src].push_back(pk.id);
        tl.packets.push_back(std::move(pk));
      }
    }
  }

  std::map<int, std::vector<detail::ResKey>> resources;  // per packet
  for (const auto& pk : tl.packets) {
    auto& res = resources[pk.id];
    for (const auto& link : pk.route.links)
      res.push_back({0, ag.tile_index(link.from), ag.tile_index(link.to)});
    res.push_back({1, ag.tile_index(mapping.placement.at(pk.dst)), 0});
  }

  std::map<int, int> inbound_left;
  std::map<int, std::int64_t> ready_at;
  for (const auto& n : tg.nodes) {
    inbound_left[n.id] = 0;
    ready_at[n.id] = 0;
  }
  for (const auto& e : tg.edges) ++inbound_left[e.to];

  std::map<int, size_t> next_send;  // per-source cursor into sends
  for (const auto& [src, ids] : sends) next_send[src] = 0;

  std::set<detail::ResKey> busy;
  struct Blocked {
    std::int64_t since;
    int packet;
    bool operator<(const Blocked& o) const {
      return std::tie(since, packet) < std::tie(o.since, o.packet);
    }
  };
  std::vector<Blocked> blocked;  // kept sorted

  // Event kinds, in processing order at equal times: releases free resources
  // before any new injection attempt looks at them.
  enum Kind { kRelease = 0, kTrySend = 1 };
  struct Event {
    std::int64_t t;
    int kind;
    int id;  // packet id for releases, cluster id for send attempts
    bool operator>(const Event& o) const {
      return std::tie(t, kind, id) > std::tie(o.t, o.kind, o.id);
    }
  };
  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue;

  auto first_busy = [&](const Packet& pk) -> const detail::ResKey* {
    if (!opts.contention) return nullptr;
    for (const auto& r : resources.at(pk.id))
      if (busy.count(r)) return &r;
    return nullptr;
  };

  auto inject = [&](Packet& pk, std::int64_t t) {
    pk.inject_ns = t;
    pk.head_ns = t + head_latency_ns(p, pk.route.routers);
    pk.tail_ns = pk.head_ns + (pk.flits - 1) * p.flit_cycle;
    if (opts.contention)
      for (const auto& r : resources.at(pk.id)) busy.insert(r);
    queue.push({pk.tail_ns, kRelease, pk.id});
    // The source interface is free for the next packet once all flits of this
    // one have left it.
    queue.push({t + pk.flits * p.flit_cycle, kTrySend, pk.src});
  };

  auto cluster_done = [&](int cluster, std::int64_t finish) {
    tl.finish_ns[cluster] = finish;
    auto it = sends.find(cluster);
    if (it != sends.end() && !it->second.empty())
      queue.push({finish, kTrySend, cluster});
  };

  for (const auto& n : tg.nodes)
    if (inbound_left[n.id] == 0) {
      tl.start_ns[n.id] = 0;
      cluster_done(n.id, n.exec_ns);
    }

  auto try_send = [&](int cluster, std::int64_t t) {
    auto it = sends.find(cluster);
    if (it == sends.end()) return;
    size_t& cursor = next_send[cluster];
    if (cursor >= it->second.size()) return;
    Packet& pk = tl.packets[static_cast<size_t>(it->second[cursor])];
    if (pk.inject_ns >= 0 || pk.first_attempt_ns >= 0) return;  // in flight/blocked
    pk.first_attempt_ns = t;
    if (const detail::ResKey* r = first_busy(pk)) {
      tl.events.push_back({pk.id, pk.src, pk.dst, t, 0, pk.bits,
                           detail::resource_tile(ag, *r)});
      blocked.push_back({t, pk.id});
      std::sort(blocked.begin(), blocked.end());
      return;
    }
    inject(pk, t);
    ++cursor;
  };

  auto release = [&](int packet_id, std::int64_t t) {
    Packet& pk = tl.packets[static_cast<size_t>(packet_id)];
    if (opts.contention)
      for (const auto& r : resources.at(pk.id)) busy.erase(r);

    int dst = pk.dst;
    if (--inbound_left[dst] == 0) {
      tl.start_ns[dst] = t;  // the last tail is the latest tail
      cluster_done(dst, t + tg.node(dst).exec_ns);
    }

    // Grant blocked packets in first-blocked order; a later packet may bypass
    // an earlier one only when its own whole route is free.
    for (auto it = blocked.begin(); it != blocked.end();) {
      Packet& q = tl.packets[static_cast<size_t>(it->packet)];
      if (!first_busy(q)) {
        inject(q, t);
        for (auto& ev : tl.events)
          if (ev.packet_id == q.id) ev.blocked_ns = t - ev.begin_ns;
        ++next_send[q.src];
        it = blocked.erase(it);
      } else {
        ++it;
      }
    }
  };

  while (!queue.empty()) {
    Event ev = queue.top();
    queue.pop();
    if (ev.kind == kRelease)
      release(ev.id, ev.t);
    else
      try_send(ev.id, ev.t);
  }

  for (const auto& n : tg.nodes)
    if (!tl.finish_ns.count(n.id))
      throw std::logic_error("cluster " + std::to_string(n.id) +
                             " never became ready");

  for (const auto& [c, f] : tl.finish_ns)
    tl.makespan_ns = std::max(tl.makespan_ns, f);
  for (const auto& pk : tl.packets)
    tl.makespan_ns = std::max(tl.makespan_ns, pk.tail_ns);
  return tl;
}

// Route-and-size term per packet; independent of scheduling.
inline double dynamic_energy(const TaskGraph& tg, const Mapping& mapping,
                             const ArchGraph& ag) {
  double e = 0.0;
  for (const auto& edge : tg.edges)
    e += static_cast<double>(edge.volume_bits) *
         energy_per_bit(ag, mapping.placement.at(edge.from),
                        mapping.placement.at(edge.to));
  return e;
}

// Buffer-parking cost of congestion: power coefficient x blocked bits x wait.
inline double static_energy(const std::vector<CongestionEvent>& events,
                            double p_st) {
  double e = 0.0;
  for (const auto& ev : events)
    e += p_st * static_cast<double>(ev.bits) *
         static_cast<double>(ev.blocked_ns);
  return e;
}

struct EnergyReport {
  double e_dynoc_j = 0.0;
  double e_stnoc_j = 0.0;
  double e_noc_j = 0.0;
  double e_nodes_j = 0.0;
  double e_total_j = 0.0;
  std::int64_t makespan_ns = 0;
  std::string digest;  // task graph fingerprint
  std::string mapping_algorithm;
  std::vector<CongestionEvent> events;
};

inline EnergyReport make_report(const TaskGraph& tg, const Mapping& mapping,
                                const ArchGraph& ag, const Timeline& tl) {
  EnergyReport r;
  r.e_dynoc_j = dynamic_energy(tg, mapping, ag);
  r.e_stnoc_j = static_energy(tl.events, ag.params.p_st);
  r.e_noc_j = r.e_dynoc_j + r.e_stnoc_j;
  r.e_nodes_j = tg.total_node_energy();
  r.e_total_j = r.e_nodes_j + r.e_noc_j;
  r.makespan_ns = tl.makespan_ns;
  r.digest = task_graph_digest(tg);
  r.mapping_algorithm = mapping.algorithm;
  r.events = tl.events;
  return r;
}

}  // namespace nocflow
