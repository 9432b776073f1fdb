#pragma once
// JSON and CSV serialization for every pipeline artifact, plus the
// mapping-comparison document. All exporters are deterministic: object keys
// are sorted by the JSON library, arrays follow stored (sorted) order, and no
// environment-dependent values (timestamps, absolute paths) are emitted.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "nocflow/arch.hpp"
#include "nocflow/ddg.hpp"
#include "nocflow/mapping.hpp"
#include "nocflow/partition.hpp"
#include "nocflow/sim.hpp"
#include "nocflow/task_graph.hpp"
#include "nocflow/trace.hpp"

namespace nocflow {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Dependency tables
// ---------------------------------------------------------------------------

inline json tables_to_json(const DependencyTables& t) {
  json src = json::object();
  for (const auto& [reg, readers] : t.src_table) src[reg] = readers;
  json dest = json::object();
  for (const auto& [reg, writer] : t.dest_table) dest[reg] = writer;
  json dep = json::object();
  for (const auto& [line, entries] : t.dep_table) {
    json arr = json::array();
    for (const auto& e : entries)
      arr.push_back({{"producer", e.producer_line},
                     {"latency", e.latency},
                     {"data_size", e.data_size}});
    dep[std::to_string(line)] = std::move(arr);
  }
  return json{{"src_table", std::move(src)},
              {"dest_table", std::move(dest)},
              {"dep_table", std::move(dep)}};
}

// ---------------------------------------------------------------------------
// Dependency graph
// ---------------------------------------------------------------------------

inline json ddg_to_json(const Ddg& g) {
  json nodes = json::array();
  for (const auto& n : g.nodes)
    nodes.push_back({{"id", n.id},
                     {"opcode", opcode_name(n.opcode)},
                     {"group", group_name(n.group)},
                     {"energy_j", n.energy_j},
                     {"latency", n.latency},
                     {"data_size", n.data_size}});
  json edges = json::array();
  for (const auto& e : g.edges)
    edges.push_back({{"from", e.from},
                     {"to", e.to},
                     {"weight", e.weight},
                     {"bits", e.bits}});
  return json{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

// ---------------------------------------------------------------------------
// Partition
// ---------------------------------------------------------------------------

inline json partition_to_json(const Partition& p) {
  json assign = json::object();
  for (const auto& [node, comm] : p.assignment)
    assign[std::to_string(node)] = comm;
  json cands = json::array();
  for (const auto& c : p.candidates)
    cands.push_back({{"requested_count", c.requested_count},
                     {"n_c", c.n_c},
                     {"q", c.q},
                     {"inter_cluster_weight", c.inter_cluster_weight}});
  return json{{"assignment", std::move(assign)},
              {"n_c", p.n_c},
              {"q", p.q},
              {"inter_cluster_weight", p.inter_cluster_weight},
              {"candidates", std::move(cands)}};
}

// ---------------------------------------------------------------------------
// Task graph
// ---------------------------------------------------------------------------

inline json task_graph_to_json(const TaskGraph& tg) {
  json nodes = json::array();
  for (const auto& n : tg.nodes)
    nodes.push_back({{"id", n.id},
                     {"energy_j", n.energy_j},
                     {"exec_ns", n.exec_ns}});
  json edges = json::array();
  for (const auto& e : tg.edges)
    edges.push_back({{"from", e.from},
                     {"to", e.to},
                     {"volume_bits", e.volume_bits},
                     {"bandwidth_bps", e.bandwidth_bps}});
  return json{{"nodes", std::move(nodes)},
              {"edges", std::move(edges)},
              {"warnings", tg.warnings},
              {"digest", task_graph_digest(tg)}};
}

inline TaskGraph task_graph_from_json(const json& j) {
  TaskGraph tg;
  for (const auto& n : j.at("nodes"))
    tg.nodes.push_back({n.at("id").get<int>(), n.at("energy_j").get<double>(),
                        n.at("exec_ns").get<std::int64_t>()});
  for (const auto& e : j.at("edges"))
    tg.edges.push_back({e.at("from").get<int>(), e.at("to").get<int>(),
                        e.at("volume_bits").get<std::int64_t>(),
                        e.value("bandwidth_bps", 0.0)});
  if (j.contains("warnings"))
    tg.warnings = j.at("warnings").get<std::vector<std::string>>();
  if (j.contains("digest")) {
    std::string want = j.at("digest").get<std::string>();
    std::string got = task_graph_digest(tg);
    if (want != got)
      throw std::runtime_error("task graph digest mismatch: document says " +
                               want + " but content hashes to " + got);
  }
  return tg;
}

// ---------------------------------------------------------------------------
// Mapping
// ---------------------------------------------------------------------------

inline json tile_to_json(const Tile& t) { return json{{"x", t.x}, {"y", t.y}}; }

inline Tile tile_from_json(const json& j) {
  return Tile{j.at("x").get<int>(), j.at("y").get<int>()};
}

inline json mapping_to_json(const Mapping& m, const ArchGraph& ag,
                            const TaskGraph& tg) {
  json placement = json::object();
  for (const auto& [cluster, tile] : m.placement)
    placement[std::to_string(cluster)] = tile_to_json(tile);
  json gated = json::array();
  for (const auto& t : m.gated) gated.push_back(tile_to_json(t));
  return json{{"algorithm", m.algorithm},
              {"mesh", {{"a", ag.a}, {"b", ag.b}}},
              {"placement", std::move(placement)},
              {"gated", std::move(gated)},
              {"task_graph_digest", task_graph_digest(tg)}};
}

struct MappingDoc {
  Mapping mapping;
  int mesh_a = 0;
  int mesh_b = 0;
  std::string task_graph_digest;
};

inline MappingDoc mapping_from_json(const json& j) {
  MappingDoc doc;
  doc.mapping.algorithm = j.at("algorithm").get<std::string>();
  doc.mesh_a = j.at("mesh").at("a").get<int>();
  doc.mesh_b = j.at("mesh").at("b").get<int>();
  for (const auto& [key, val] : j.at("placement").items())
    doc.mapping.placement[std::stoi(key)] = tile_from_json(val);
  if (j.contains("gated"))
    for (const auto& t : j.at("gated"))
      doc.mapping.gated.push_back(tile_from_json(t));
  if (j.contains("task_graph_digest"))
    doc.task_graph_digest = j.at("task_graph_digest").get<std::string>();
  return doc;
}

// ---------------------------------------------------------------------------
// Energy report
// ---------------------------------------------------------------------------

inline json report_to_json(const EnergyReport& r) {
  json events = json::array();
  for (const auto& ev : r.events)
    events.push_back({{"packet_id", ev.packet_id},
                      {"src", ev.src},
                      {"dst", ev.dst},
                      {"begin_ns", ev.begin_ns},
                      {"blocked_ns", ev.blocked_ns},
                      {"bits", ev.bits},
                      {"location", tile_to_json(ev.location)}});
  return json{{"mapping_algorithm", r.mapping_algorithm},
              {"task_graph_digest", r.digest},
              {"e_dynoc_j", r.e_dynoc_j},
              {"e_stnoc_j", r.e_stnoc_j},
              {"e_noc_j", r.e_noc_j},
              {"e_nodes_j", r.e_nodes_j},
              {"e_total_j", r.e_total_j},
              {"makespan_ns", r.makespan_ns},
              {"congestion_events", std::move(events)}};
}

// Loading re-validates the additive energy identities; a report whose totals
// do not decompose is rejected.
inline EnergyReport report_from_json(const json& j) {
  EnergyReport r;
  r.mapping_algorithm = j.at("mapping_algorithm").get<std::string>();
  r.digest = j.at("task_graph_digest").get<std::string>();
  r.e_dynoc_j = j.at("e_dynoc_j").get<double>();
  r.e_stnoc_j = j.at("e_stnoc_j").get<double>();
  r.e_noc_j = j.at("e_noc_j").get<double>();
  r.e_nodes_j = j.at("e_nodes_j").get<double>();
  r.e_total_j = j.at("e_total_j").get<double>();
  r.makespan_ns = j.at("makespan_ns").get<std::int64_t>();
  if (j.contains("congestion_events"))
    for (const auto& ev : j.at("congestion_events"))
      r.events.push_back({ev.at("packet_id").get<int>(),
                          ev.at("src").get<int>(), ev.at("dst").get<int>(),
                          ev.at("begin_ns").get<std::int64_t>(),
                          ev.at("blocked_ns").get<std::int64_t>(),
                          ev.at("bits").get<std::int64_t>(),
                          tile_from_json(ev.at("location"))});

  auto close = [](double lhs, double rhs) {
    double tol = 1e-18 + 1e-12 * std::max(std::abs(lhs), std::abs(rhs));
    return std::abs(lhs - rhs) <= tol;
  };
  if (!close(r.e_noc_j, r.e_dynoc_j + r.e_stnoc_j))
    throw std::runtime_error(
        "energy report identity violated: e_noc_j != e_dynoc_j + e_stnoc_j");
  if (!close(r.e_total_j, r.e_nodes_j + r.e_noc_j))
    throw std::runtime_error(
        "energy report identity violated: e_total_j != e_nodes_j + e_noc_j");
  return r;
}

// ---------------------------------------------------------------------------
// Timeline CSV
// ---------------------------------------------------------------------------

namespace detail {

inline std::string tile_str(const Tile& t) {
  return "\"(" + std::to_string(t.x) + "," + std::to_string(t.y) + ")\"";
}

struct CsvRow {
  std::int64_t time = 0;
  int kind = 0;  // tail=0, start=1, finish=2, blocked=3, inject=4, head=5
  int a = 0;
  int b = 0;
  std::string text;
  std::string location;

  bool operator<(const CsvRow& o) const {
    return std::tie(time, kind, a, b) < std::tie(o.time, o.kind, o.a, o.b);
  }
};

}  // namespace detail

// Columns: event,time_ns,location. Rows are sorted by time with a fixed
// causal order for simultaneous events (tail before the cluster start it
// triggers, finish before the injections it enables).
inline std::string timeline_to_csv(const Timeline& tl, const Mapping& m) {
  std::vector<detail::CsvRow> rows;
  auto tile_of = [&](int cluster) { return m.placement.at(cluster); };

  for (const auto& [cluster, start] : tl.start_ns) {
    rows.push_back({start, 1, cluster, 0, "start:c" + std::to_string(cluster),
                    detail::tile_str(tile_of(cluster))});
    rows.push_back({tl.finish_ns.at(cluster), 2, cluster, 0,
                    "finish:c" + std::to_string(cluster),
                    detail::tile_str(tile_of(cluster))});
  }
  for (const auto& p : tl.packets) {
    std::string pair =
        "c" + std::to_string(p.src) + "->c" + std::to_string(p.dst);
    rows.push_back({p.inject_ns, 4, p.src, p.dst, "inject:" + pair,
                    detail::tile_str(tile_of(p.src))});
    rows.push_back({p.head_ns, 5, p.src, p.dst, "head:" + pair,
                    detail::tile_str(tile_of(p.dst))});
    rows.push_back({p.tail_ns, 0, p.src, p.dst, "tail:" + pair,
                    detail::tile_str(tile_of(p.dst))});
  }
  for (const auto& ev : tl.events) {
    std::string pair =
        "c" + std::to_string(ev.src) + "->c" + std::to_string(ev.dst);
    rows.push_back({ev.begin_ns, 3, ev.src, ev.dst, "blocked:" + pair,
                    detail::tile_str(ev.location)});
  }
  std::sort(rows.begin(), rows.end());

  std::ostringstream os;
  os << "event,time_ns,location\n";
  for (const auto& r : rows)
    os << r.text << ',' << r.time << ',' << r.location << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Mapping comparison
// ---------------------------------------------------------------------------

namespace detail {

inline json metric_delta(double base, double other) {
  json out{{"cdm", base}, {"cwm", other}, {"delta_abs", other - base}};
  if (base != 0.0)
    out["delta_pct"] = (other - base) / base * 100.0;
  else if (other == 0.0)
    out["delta_pct"] = 0.0;
  else
    out["delta_pct"] = nullptr;  // undefined against a zero baseline
  return out;
}

}  // namespace detail

// Side-by-side energy/makespan comparison of two reports for the same task
// graph. Percentages are relative to the first (depth-ordered) report.
inline json compare_mappings(const EnergyReport& cdm, const EnergyReport& cwm) {
  if (cdm.digest != cwm.digest)
    throw std::invalid_argument(
        "cannot compare reports: task graph digests differ (" + cdm.digest +
        " vs " + cwm.digest + ")");
  json out;
  out["task_graph_digest"] = cdm.digest;
  out["baseline_algorithm"] = cdm.mapping_algorithm;
  out["compared_algorithm"] = cwm.mapping_algorithm;
  out["e_dynoc_j"] = detail::metric_delta(cdm.e_dynoc_j, cwm.e_dynoc_j);
  out["e_stnoc_j"] = detail::metric_delta(cdm.e_stnoc_j, cwm.e_stnoc_j);
  out["e_noc_j"] = detail::metric_delta(cdm.e_noc_j, cwm.e_noc_j);
  out["e_total_j"] = detail::metric_delta(cdm.e_total_j, cwm.e_total_j);
  out["makespan_ns"] =
      detail::metric_delta(static_cast<double>(cdm.makespan_ns),
                           static_cast<double>(cwm.makespan_ns));
  out["congestion_events"] =
      json{{"cdm", cdm.events.size()}, {"cwm", cwm.events.size()}};
  return out;
}

}  // namespace nocflow
