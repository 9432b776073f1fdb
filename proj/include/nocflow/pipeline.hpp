#pragma once
// Full flow: trace text -> dependency tables -> weighted DDG -> curvature
// partition -> cluster task graph -> tile mapping(s) -> wormhole simulation ->
// energy reports and comparison. Writes the artifact bundle to a directory;
// every file is a pure function of (trace text, config), so repeated runs are
// byte-identical.

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "nocflow/config.hpp"
#include "nocflow/ddg.hpp"
#include "nocflow/dot.hpp"
#include "nocflow/json_io.hpp"
#include "nocflow/mapping.hpp"
#include "nocflow/partition.hpp"
#include "nocflow/sim.hpp"
#include "nocflow/task_graph.hpp"
#include "nocflow/trace.hpp"

namespace nocflow {

struct MappingRun {
  Mapping mapping;
  Timeline timeline;
  EnergyReport report;
};

struct PipelineResult {
  TraceProgram program;
  DependencyTables tables;
  Ddg ddg;
  Partition partition;
  TaskGraph task_graph;
  std::map<int, int> depths;
  std::optional<MappingRun> cdm;
  std::optional<MappingRun> cwm;
  std::optional<json> comparison;
};

namespace detail {

inline void write_file(const std::filesystem::path& p,
                       const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + p.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + p.string());
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace detail

// Run every stage in memory. Does not touch the filesystem.
inline PipelineResult run_pipeline(const std::string& trace_text,
                                   const PipelineConfig& cfg) {
  PipelineResult r;
  r.program = parse_trace(trace_text, cfg.latency);
  r.tables = build_tables(r.program);
  r.ddg = build_ddg(r.program, r.tables, cfg.energy);
  r.partition = discover_communities(r.ddg, cfg.cores, cfg.partition_options());
  r.task_graph =
      build_task_graph(r.ddg, r.partition.assignment, cfg.ns_per_cycle);
  r.depths = depth_assign(r.task_graph);

  ArchGraph ag = cfg.arch();
  auto run_one = [&](Mapping m) -> MappingRun {
    Timeline tl = simulate(r.task_graph, m, ag, cfg.sim);
    EnergyReport rep = make_report(r.task_graph, m, ag, tl);
    return MappingRun{std::move(m), std::move(tl), std::move(rep)};
  };
  if (cfg.algorithm == MapAlgo::Cdm || cfg.algorithm == MapAlgo::Both)
    r.cdm = run_one(cdm_map(r.task_graph, ag));
  if (cfg.algorithm == MapAlgo::Cwm || cfg.algorithm == MapAlgo::Both)
    r.cwm = run_one(cwm_map(r.task_graph, ag));
  if (r.cdm && r.cwm)
    r.comparison = compare_mappings(r.cdm->report, r.cwm->report);
  return r;
}

// Run every stage and write the artifact bundle into out_dir (created if
// absent): dependency tables, DDG (JSON + DOT), partition, task graph
// (JSON + DOT with depths), and per-algorithm mapping/timeline/report files,
// plus comparison.json when both mappings ran.
inline PipelineResult run_pipeline(const std::string& trace_text,
                                   const PipelineConfig& cfg,
                                   const std::filesystem::path& out_dir) {
  PipelineResult r = run_pipeline(trace_text, cfg);
  ArchGraph ag = cfg.arch();

  std::filesystem::create_directories(out_dir);
  detail::write_file(out_dir / "tables.json",
                     detail::dump(tables_to_json(r.tables)));
  detail::write_file(out_dir / "ddg.json", detail::dump(ddg_to_json(r.ddg)));
  detail::write_file(out_dir / "ddg.dot", export_dot(r.ddg));
  detail::write_file(out_dir / "partition.json",
                     detail::dump(partition_to_json(r.partition)));
  detail::write_file(out_dir / "task_graph.json",
                     detail::dump(task_graph_to_json(r.task_graph)));
  detail::write_file(out_dir / "task_graph.dot",
                     export_dot(r.task_graph, &r.depths));

  auto write_run = [&](const MappingRun& mr, const std::string& tag) {
    detail::write_file(out_dir / ("mapping_" + tag + ".json"),
                       detail::dump(mapping_to_json(mr.mapping, ag,
                                                    r.task_graph)));
    detail::write_file(out_dir / ("timeline_" + tag + ".csv"),
                       timeline_to_csv(mr.timeline, mr.mapping));
    detail::write_file(out_dir / ("report_" + tag + ".json"),
                       detail::dump(report_to_json(mr.report)));
  };
  if (r.cdm) write_run(*r.cdm, "cdm");
  if (r.cwm) write_run(*r.cwm, "cwm");
  if (r.comparison)
    detail::write_file(out_dir / "comparison.json",
                       detail::dump(*r.comparison));
  return r;
}

}  // namespace nocflow
