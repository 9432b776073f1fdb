#pragma once
// Pipeline configuration: one structured JSON file supplies every tunable of
// the flow. mesh.a, mesh.b and cores are required; everything else defaults
// to the worked-example values documented in the README.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "nocflow/arch.hpp"
#include "nocflow/partition.hpp"
#include "nocflow/sim.hpp"
#include "nocflow/trace.hpp"

namespace nocflow {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class MapAlgo { Cdm, Cwm, Both };

struct PipelineConfig {
  int mesh_a = 2;
  int mesh_b = 2;
  int cores = 4;
  EnergyTable energy;
  LatencyDefaults latency;
  NocParams noc;
  DistanceMode distance_mode = DistanceMode::Hop;
  double idleness = 0.0;
  PartitionOptions::Selection selection = PartitionOptions::Selection::MinCut;
  int min_size = 0;  // 0 = automatic
  double bytes_per_weight_unit = 1.0;
  MapAlgo algorithm = MapAlgo::Both;
  SimOptions sim;
  double ns_per_cycle = 1.0;

  ArchGraph arch() const { return ArchGraph{mesh_a, mesh_b, noc}; }

  PartitionOptions partition_options() const {
    PartitionOptions opts;
    opts.distance_mode = distance_mode;
    opts.idleness = idleness;
    opts.selection = selection;
    opts.min_size = min_size;
    opts.bytes_per_weight_unit = bytes_per_weight_unit;
    opts.mesh_a = mesh_a;
    opts.mesh_b = mesh_b;
    opts.noc = noc;
    return opts;
  }
};

namespace detail {

inline const nlohmann::json& require_key(const nlohmann::json& j,
                                         const std::string& key,
                                         const std::string& path) {
  auto it = j.find(key);
  if (it == j.end())
    throw ConfigError("missing required config key '" + path + "'");
  return *it;
}

template <typename T>
T get_or(const nlohmann::json& j, const std::string& key, T fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  return it->get<T>();
}

inline void require_positive(double v, const std::string& path) {
  if (!(v > 0.0))
    throw ConfigError("config key '" + path + "' must be positive");
}

}  // namespace detail

inline PipelineConfig config_from_json(const nlohmann::json& j) {
  PipelineConfig c;

  const auto& mesh = detail::require_key(j, "mesh", "mesh");
  c.mesh_a = detail::require_key(mesh, "a", "mesh.a").get<int>();
  c.mesh_b = detail::require_key(mesh, "b", "mesh.b").get<int>();
  c.cores = detail::require_key(j, "cores", "cores").get<int>();

  if (c.mesh_a < 1 || c.mesh_b < 1)
    throw ConfigError("mesh dimensions must be at least 1x1");
  if (c.cores < 2)
    throw ConfigError(
        "config key 'cores' must be at least 2 (community discovery needs "
        "a candidate range)");
  if (c.cores > c.mesh_a * c.mesh_b)
    throw ConfigError("config key 'cores' exceeds mesh capacity " +
                      std::to_string(c.mesh_a) + "x" +
                      std::to_string(c.mesh_b));

  if (j.contains("energy_table")) {
    const auto& e = j.at("energy_table");
    c.energy.m = detail::get_or(e, "m", c.energy.m);
    c.energy.b = detail::get_or(e, "b", c.energy.b);
    c.energy.d = detail::get_or(e, "d", c.energy.d);
    c.energy.g = detail::get_or(e, "g", c.energy.g);
    detail::require_positive(c.energy.m, "energy_table.m");
    detail::require_positive(c.energy.b, "energy_table.b");
    detail::require_positive(c.energy.d, "energy_table.d");
    detail::require_positive(c.energy.g, "energy_table.g");
  }

  if (j.contains("latency")) {
    const auto& l = j.at("latency");
    c.latency.load = detail::get_or(l, "load", c.latency.load);
    c.latency.store = detail::get_or(l, "store", c.latency.store);
    c.latency.div_group = detail::get_or(l, "div", c.latency.div_group);
    c.latency.other = detail::get_or(l, "other", c.latency.other);
    if (c.latency.load < 1 || c.latency.store < 1 || c.latency.div_group < 1 ||
        c.latency.other < 1)
      throw ConfigError("latency values must be at least 1 cycle");
  }

  if (j.contains("noc")) {
    const auto& n = j.at("noc");
    c.noc.e_s_bit = detail::get_or(n, "e_s_bit", c.noc.e_s_bit);
    c.noc.e_l_bit = detail::get_or(n, "e_l_bit", c.noc.e_l_bit);
    c.noc.p_st = detail::get_or(n, "p_st", c.noc.p_st);
    c.noc.t_s = detail::get_or<std::int64_t>(n, "t_s_ns", c.noc.t_s);
    c.noc.t_l = detail::get_or<std::int64_t>(n, "t_l_ns", c.noc.t_l);
    c.noc.flit_cycle =
        detail::get_or<std::int64_t>(n, "flit_cycle_ns", c.noc.flit_cycle);
    c.noc.flit_size_bits =
        detail::get_or<std::int64_t>(n, "flit_size_bits", c.noc.flit_size_bits);
    detail::require_positive(c.noc.e_s_bit, "noc.e_s_bit");
    detail::require_positive(c.noc.e_l_bit, "noc.e_l_bit");
    detail::require_positive(c.noc.p_st, "noc.p_st");
    if (c.noc.t_s < 1 || c.noc.t_l < 1 || c.noc.flit_cycle < 1 ||
        c.noc.flit_size_bits < 1)
      throw ConfigError("noc timing/flit values must be at least 1");
  }

  if (j.contains("partition")) {
    const auto& p = j.at("partition");
    std::string dist = detail::get_or<std::string>(p, "distance_mode", "hop");
    if (dist == "hop")
      c.distance_mode = DistanceMode::Hop;
    else if (dist == "weighted")
      c.distance_mode = DistanceMode::Weighted;
    else
      throw ConfigError("config key 'partition.distance_mode' must be 'hop' "
                        "or 'weighted'");
    c.idleness = detail::get_or(p, "idleness", c.idleness);
    if (c.idleness < 0.0 || c.idleness >= 1.0)
      throw ConfigError("config key 'partition.idleness' must lie in [0,1)");
    std::string sel = detail::get_or<std::string>(p, "selection", "min_cut");
    if (sel == "min_cut")
      c.selection = PartitionOptions::Selection::MinCut;
    else if (sel == "max_q")
      c.selection = PartitionOptions::Selection::MaxQ;
    else
      throw ConfigError(
          "config key 'partition.selection' must be 'min_cut' or 'max_q'");
    c.min_size = detail::get_or(p, "min_size", c.min_size);
    if (c.min_size < 0)
      throw ConfigError("config key 'partition.min_size' must be >= 0");
    c.bytes_per_weight_unit =
        detail::get_or(p, "bytes_per_weight_unit", c.bytes_per_weight_unit);
    detail::require_positive(c.bytes_per_weight_unit,
                             "partition.bytes_per_weight_unit");
  }

  if (j.contains("mapping")) {
    std::string algo =
        detail::get_or<std::string>(j.at("mapping"), "algorithm", "both");
    if (algo == "cdm")
      c.algorithm = MapAlgo::Cdm;
    else if (algo == "cwm")
      c.algorithm = MapAlgo::Cwm;
    else if (algo == "both")
      c.algorithm = MapAlgo::Both;
    else
      throw ConfigError(
          "config key 'mapping.algorithm' must be 'cdm', 'cwm' or 'both'");
  }

  if (j.contains("sim")) {
    const auto& s = j.at("sim");
    std::string order = detail::get_or<std::string>(s, "send_order", "dest_id");
    if (order == "dest_id")
      c.sim.send_order = SimOptions::SendOrder::DestId;
    else if (order == "edge_order")
      c.sim.send_order = SimOptions::SendOrder::EdgeOrder;
    else
      throw ConfigError(
          "config key 'sim.send_order' must be 'dest_id' or 'edge_order'");
    c.sim.contention = detail::get_or(s, "contention", c.sim.contention);
    c.ns_per_cycle = detail::get_or(s, "ns_per_cycle", c.ns_per_cycle);
    detail::require_positive(c.ns_per_cycle, "sim.ns_per_cycle");
  }

  return c;
}

inline PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

}  // namespace nocflow
