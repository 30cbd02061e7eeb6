#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mbnetsim/config.hpp"
#include "mbnetsim/log.hpp"

namespace {

int run_simulate(const std::string& config_path, std::optional<std::uint64_t> seed,
                 std::optional<std::string> out, std::optional<unsigned> threads) {
  using namespace mbnetsim;
  RunConfig rc = load_config(config_path, seed, out);
  Network net = load_topology_file(rc.topology_path, rc.topology);
  log_info("topology: " + std::to_string(net.node_count()) + " nodes, " +
           std::to_string(net.edge_count()) + " edges");

  std::ofstream event_log;
  std::ostream* event_sink = nullptr;
  if (!rc.event_log_path.empty()) {
    event_log.open(rc.event_log_path);
    if (!event_log) throw std::runtime_error("cannot open event log " + rc.event_log_path);
    event_sink = &event_log;
  }

  auto rows = run_sweep(net, rc.sweep, rc.sim, rc.traffic,
                        threads.value_or(std::thread::hardware_concurrency()), event_sink,
                        [](std::size_t done, std::size_t total) {
                          log_debug("sweep point " + std::to_string(done) + "/" +
                                    std::to_string(total) + " done");
                        });
  write_csv_file(rows, rc.out_csv);
  log_info("wrote " + std::to_string(rows.size()) + " rows to " + rc.out_csv);

  std::printf("%-18s %10s %6s %12s %12s\n", "scenario", "load", "seeds", "bp_mean", "bp_std");
  for (const auto& s : summarize(rows)) {
    std::printf("%-18s %10.4g %6zu %12.6g %12.6g\n", s.scenario.c_str(), s.load_erlang, s.seeds,
                s.bp_mean, s.bp_std);
  }
  return 0;
}

int run_validate(const std::string& topology_path) {
  using namespace mbnetsim;
  Network net = load_topology_file(topology_path);
  std::printf("nodes=%zu edges=%zu\n", net.node_count(), net.edge_count());
  return 0;
}

int run_failure_demo(const std::string& config_path, mbnetsim::EdgeId edge) {
  using namespace mbnetsim;
  RunConfig rc = load_config(config_path);
  Network net = load_topology_file(rc.topology_path, rc.topology);
  const Scenario* scenario = find_scenario(rc.sweep.scenarios.front());

  SimulationConfig cfg = rc.sim;
  cfg.working_bands = scenario->working_bands;
  cfg.protection = scenario->protection;
  TrafficModel traffic = rc.traffic;
  traffic.arrival_rate = rc.sweep.loads.front() / traffic.mean_holding;
  traffic.seed = rc.sweep.seeds.front();

  Simulation sim(net, cfg);
  sim.offer_traffic(traffic, rc.sweep.requests_per_point);
  sim.process_until_offered(rc.sweep.requests_per_point);
  RunMetrics warm = sim.metrics();
  std::printf("warmup: scenario=%s load=%s offered=%llu accepted=%llu blocked=%llu active=%zu\n",
              scenario->name.c_str(), format_sig(traffic.load_erlang()).c_str(),
              static_cast<unsigned long long>(warm.offered),
              static_cast<unsigned long long>(warm.accepted),
              static_cast<unsigned long long>(warm.blocked), sim.records().size());

  FailureReport report = sim.inject_failure(edge);
  const Edge& e = sim.network().edge(edge);
  std::printf("FAIL edge=%u (%s-%s, %.1f km)\n", edge, sim.network().node_name(e.u).c_str(),
              sim.network().node_name(e.v).c_str(), e.length_km);
  std::printf("affected=%zu restored=%zu lost=%zu\n", report.affected(), report.restored.size(),
              report.lost.size());
  auto print_ids = [](const char* label, const std::vector<LightpathId>& ids) {
    std::printf("%s:", label);
    for (auto id : ids) std::printf(" %llu", static_cast<unsigned long long>(id));
    std::printf("\n");
  };
  print_ids("restored", report.restored);
  print_ids("lost", report.lost);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-band C+L+S flexible-grid optical network simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> threads;
  auto* simulate = app.add_subcommand("simulate", "run the configured sweep and write a CSV");
  simulate->add_option("--config", config_path, "run configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  simulate->add_option("--seed", seed, "override the configured seed list with one seed");
  simulate->add_option("--out", out, "override the configured CSV output path");
  simulate->add_option("--threads", threads, "worker threads for sweep points");

  std::string topology_path;
  auto* validate = app.add_subcommand("validate", "check a topology document");
  validate->add_option("--topology", topology_path, "topology JSON document")
      ->required()
      ->check(CLI::ExistingFile);

  std::string demo_config;
  mbnetsim::EdgeId demo_edge = 0;
  auto* demo = app.add_subcommand("failure-demo",
                                  "admit a deterministic demand set, fail one edge, report");
  demo->add_option("--config", demo_config, "run configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  demo->add_option("--edge", demo_edge, "edge id to fail")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return run_simulate(config_path, seed, out, threads);
    if (validate->parsed()) return run_validate(topology_path);
    if (demo->parsed()) return run_failure_demo(demo_config, demo_edge);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
