// Command-line front end for the trace-to-NoC flow.
//
// Subcommands:
//   gen        emit a synthetic PD-controller trace
//   parse      trace -> dependency tables + DDG (JSON/DOT)
//   partition  trace -> communities + cluster task graph
//   map        task graph JSON -> tile placement(s)
//   simulate   task graph + mapping -> timeline CSV + energy report
//   run        full pipeline, writes the whole artifact bundle
//   compare    two energy reports -> comparison document
//
// Exit codes: 0 success, 1 runtime failure, 2 validation failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "nocflow/nocflow.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

nocflow::json read_json(const std::string& path) {
  try {
    return nocflow::json::parse(read_file(path));
  } catch (const nocflow::json::parse_error& e) {
    throw std::invalid_argument(path + " is not valid JSON: " + e.what());
  }
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  nocflow::detail::write_file(path, content);
}

nocflow::PipelineConfig config_or_default(const std::string& path) {
  if (path.empty()) return nocflow::PipelineConfig{};
  return nocflow::load_config(path);
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void print_run_summary(const nocflow::PipelineResult& r) {
  std::cout << "clusters=" << r.task_graph.nodes.size()
            << " q=" << num(r.partition.q)
            << " cut_weight=" << num(r.partition.inter_cluster_weight) << "\n";
  auto line = [&](const nocflow::MappingRun& mr) {
    std::cout << mr.mapping.algorithm << ": e_total=" << num(mr.report.e_total_j)
              << " J, e_noc=" << num(mr.report.e_noc_j)
              << " J, makespan=" << mr.report.makespan_ns << " ns, "
              << mr.report.events.size() << " congestion event(s)\n";
  };
  if (r.cdm) line(*r.cdm);
  if (r.cwm) line(*r.cwm);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Instruction-trace to NoC partition/mapping/energy flow"};
  app.require_subcommand(1);

  // --- gen ---------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "Generate a PD-controller trace");
  int gen_steps = 8;
  std::uint64_t gen_seed = 42;
  std::string gen_out;
  gen->add_option("--steps", gen_steps, "Control-loop iterations (>= 1)");
  gen->add_option("--seed", gen_seed, "Seed for the per-step gain constants");
  gen->add_option("-o,--output", gen_out, "Output file (default stdout)");
  gen->callback([&] {
    write_output(gen_out, nocflow::gen_pd_trace(gen_steps, gen_seed));
  });

  // --- parse ---------------------------------------------------------------
  auto* parse = app.add_subcommand(
      "parse", "Parse a trace into dependency tables and a DDG");
  std::string parse_trace_path, parse_config, parse_dir = "nocflow_out";
  parse->add_option("trace", parse_trace_path, "Trace file")->required();
  parse->add_option("-c,--config", parse_config, "Config JSON file");
  parse->add_option("-o,--out-dir", parse_dir, "Output directory");
  parse->callback([&] {
    auto cfg = config_or_default(parse_config);
    auto program = nocflow::parse_trace(read_file(parse_trace_path),
                                        cfg.latency);
    auto tables = nocflow::build_tables(program);
    auto ddg = nocflow::build_ddg(program, tables, cfg.energy);
    std::filesystem::create_directories(parse_dir);
    namespace nd = nocflow::detail;
    nd::write_file(std::filesystem::path(parse_dir) / "tables.json",
                   nd::dump(nocflow::tables_to_json(tables)));
    nd::write_file(std::filesystem::path(parse_dir) / "ddg.json",
                   nd::dump(nocflow::ddg_to_json(ddg)));
    nd::write_file(std::filesystem::path(parse_dir) / "ddg.dot",
                   nocflow::export_dot(ddg));
    std::cout << "parsed " << program.instructions.size() << " instructions, "
              << ddg.edges.size() << " dependence edges\n";
  });

  // --- partition -----------------------------------------------------------
  auto* part = app.add_subcommand(
      "partition", "Partition a trace's DDG into clusters");
  std::string part_trace, part_config, part_dir = "nocflow_out";
  part->add_option("trace", part_trace, "Trace file")->required();
  part->add_option("-c,--config", part_config, "Config JSON file");
  part->add_option("-o,--out-dir", part_dir, "Output directory");
  part->callback([&] {
    auto cfg = config_or_default(part_config);
    auto program = nocflow::parse_trace(read_file(part_trace), cfg.latency);
    auto tables = nocflow::build_tables(program);
    auto ddg = nocflow::build_ddg(program, tables, cfg.energy);
    auto partition = nocflow::discover_communities(ddg, cfg.cores,
                                                   cfg.partition_options());
    auto tg = nocflow::build_task_graph(ddg, partition.assignment,
                                        cfg.ns_per_cycle);
    auto depths = nocflow::depth_assign(tg);
    std::filesystem::create_directories(part_dir);
    namespace nd = nocflow::detail;
    std::filesystem::path dir(part_dir);
    nd::write_file(dir / "partition.json",
                   nd::dump(nocflow::partition_to_json(partition)));
    nd::write_file(dir / "task_graph.json",
                   nd::dump(nocflow::task_graph_to_json(tg)));
    nd::write_file(dir / "task_graph.dot", nocflow::export_dot(tg, &depths));
    std::cout << "clusters=" << tg.nodes.size() << " q=" << num(partition.q)
              << " cut_weight=" << num(partition.inter_cluster_weight) << "\n";
    for (const auto& w : tg.warnings) std::cout << "warning: " << w << "\n";
  });

  // --- map -------------------------------------------------------------
  auto* mapc = app.add_subcommand("map", "Place a task graph onto the mesh");
  std::string map_tg, map_config, map_algo, map_dir = "nocflow_out";
  mapc->add_option("--task-graph", map_tg, "task_graph.json from 'partition'")
      ->required();
  mapc->add_option("-c,--config", map_config, "Config JSON file");
  mapc->add_option("-a,--algorithm", map_algo,
                   "cdm, cwm or both (overrides config)");
  mapc->add_option("-o,--out-dir", map_dir, "Output directory");
  mapc->callback([&] {
    auto cfg = config_or_default(map_config);
    if (!map_algo.empty()) {
      if (map_algo == "cdm")
        cfg.algorithm = nocflow::MapAlgo::Cdm;
      else if (map_algo == "cwm")
        cfg.algorithm = nocflow::MapAlgo::Cwm;
      else if (map_algo == "both")
        cfg.algorithm = nocflow::MapAlgo::Both;
      else
        throw std::invalid_argument("--algorithm must be cdm, cwm or both");
    }
    auto tg = nocflow::task_graph_from_json(read_json(map_tg));
    auto ag = cfg.arch();
    std::filesystem::create_directories(map_dir);
    namespace nd = nocflow::detail;
    std::filesystem::path dir(map_dir);
    if (cfg.algorithm != nocflow::MapAlgo::Cwm) {
      auto m = nocflow::cdm_map(tg, ag);
      nd::write_file(dir / "mapping_cdm.json",
                     nd::dump(nocflow::mapping_to_json(m, ag, tg)));
    }
    if (cfg.algorithm != nocflow::MapAlgo::Cdm) {
      auto m = nocflow::cwm_map(tg, ag);
      nd::write_file(dir / "mapping_cwm.json",
                     nd::dump(nocflow::mapping_to_json(m, ag, tg)));
    }
  });

  // --- simulate ----------------------------------------------------------
  auto* simc = app.add_subcommand(
      "simulate", "Simulate one mapping and write timeline + energy report");
  std::string sim_tg, sim_mapping, sim_config, sim_dir = "nocflow_out";
  simc->add_option("--task-graph", sim_tg, "task_graph.json")->required();
  simc->add_option("--mapping", sim_mapping, "mapping JSON from 'map'")
      ->required();
  simc->add_option("-c,--config", sim_config, "Config JSON file");
  simc->add_option("-o,--out-dir", sim_dir, "Output directory");
  simc->callback([&] {
    auto cfg = config_or_default(sim_config);
    auto tg = nocflow::task_graph_from_json(read_json(sim_tg));
    auto doc = nocflow::mapping_from_json(read_json(sim_mapping));
    if (!doc.task_graph_digest.empty() &&
        doc.task_graph_digest != nocflow::task_graph_digest(tg))
      throw std::invalid_argument(
          "mapping was produced for a different task graph (digest mismatch)");
    nocflow::ArchGraph ag{doc.mesh_a, doc.mesh_b, cfg.noc};
    auto tl = nocflow::simulate(tg, doc.mapping, ag, cfg.sim);
    auto report = nocflow::make_report(tg, doc.mapping, ag, tl);
    std::filesystem::create_directories(sim_dir);
    namespace nd = nocflow::detail;
    std::filesystem::path dir(sim_dir);
    std::string tag = doc.mapping.algorithm.empty() ? std::string("run")
                                                    : doc.mapping.algorithm;
    nd::write_file(dir / ("timeline_" + tag + ".csv"),
                   nocflow::timeline_to_csv(tl, doc.mapping));
    nd::write_file(dir / ("report_" + tag + ".json"),
                   nd::dump(nocflow::report_to_json(report)));
    std::cout << tag << ": e_total=" << num(report.e_total_j)
              << " J, makespan=" << report.makespan_ns << " ns\n";
  });

  // --- run -----------------------------------------------------------------
  auto* runc = app.add_subcommand("run", "Full pipeline, full artifact bundle");
  std::string run_trace, run_config, run_dir = "nocflow_out";
  runc->add_option("trace", run_trace, "Trace file")->required();
  runc->add_option("-c,--config", run_config, "Config JSON file")->required();
  runc->add_option("-o,--out-dir", run_dir, "Output directory");
  runc->callback([&] {
    auto cfg = nocflow::load_config(run_config);
    auto result = nocflow::run_pipeline(read_file(run_trace), cfg,
                                        std::filesystem::path(run_dir));
    print_run_summary(result);
  });

  // --- compare -------------------------------------------------------------
  auto* cmp = app.add_subcommand(
      "compare", "Compare two energy reports for the same task graph");
  std::string cmp_a, cmp_b, cmp_out;
  cmp->add_option("report_cdm", cmp_a, "Baseline report JSON")->required();
  cmp->add_option("report_cwm", cmp_b, "Compared report JSON")->required();
  cmp->add_option("-o,--output", cmp_out, "Output file (default stdout)");
  cmp->callback([&] {
    auto ra = nocflow::report_from_json(read_json(cmp_a));
    auto rb = nocflow::report_from_json(read_json(cmp_b));
    write_output(cmp_out, nocflow::detail::dump(
                              nocflow::compare_mappings(ra, rb)));
  });

  try {
    app.parse(argc, argv);
    return 0;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const nocflow::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nocflow::TraceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
