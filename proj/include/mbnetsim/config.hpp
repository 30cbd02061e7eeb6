#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mbnetsim/reporting.hpp"

namespace mbnetsim {

/// Fully validated run configuration: everything the paper's scheme leaves
/// open is a key here; the scheme's constants (grid, band capacities, band
/// roles) are not configurable.
struct RunConfig {
  std::string topology_path;
  TopologyOptions topology;
  SweepSpec sweep;
  TrafficModel traffic;   // arrival_rate/seed are filled per sweep point
  SimulationConfig sim;   // working bands/protection are filled per scenario
  std::string out_csv = "results.csv";
  std::string event_log_path;  // empty disables the event log
};

namespace detail {

// Config sections ([sweep], [qot], ...) map to configurable subcommands.
inline CLI::App* config_section(CLI::App& app, const std::string& name) {
  auto* section = app.add_subcommand(name, "");
  section->configurable();
  return section;
}

inline void attach_config_options(CLI::App& app, RunConfig& rc, std::string& policy) {
  const auto positive = CLI::PositiveNumber;
  const auto open_unit = CLI::Validator(
      [](std::string& s) -> std::string {
        double v = std::stod(s);
        if (!(v > 0.0) || v > 1.0) return "value " + s + " not in (0,1]";
        return {};
      },
      "IN (0,1]");

  app.add_option("--topology", rc.topology_path, "topology JSON document")->required();

  auto* sweep = config_section(app, "sweep");
  sweep->add_option("--scenarios", rc.sweep.scenarios)
      ->required()
      ->check(CLI::IsMember({"c-only", "c+l", "c+l+s-shared", "c+l+s-dedicated"}));
  sweep->add_option("--loads", rc.sweep.loads)->required()->check(positive);
  sweep->add_option("--requests", rc.sweep.requests_per_point)->check(positive);
  sweep->add_option("--seeds", rc.sweep.seeds);

  auto* traffic = config_section(app, "traffic");
  traffic->add_option("--mean_holding", rc.traffic.mean_holding)->check(positive);
  traffic->add_option("--slots_min", rc.traffic.slots_min)->check(CLI::Range(1, 1 << 20));
  traffic->add_option("--slots_max", rc.traffic.slots_max)->check(CLI::Range(1, 1 << 20));
  traffic->add_option("--k", rc.traffic.k)->check(positive);

  auto* spectrum = config_section(app, "spectrum");
  spectrum->add_option("--guard_band", rc.sim.spectrum.guard_band_slots)
      ->check(CLI::NonNegativeNumber);

  auto* qot = config_section(app, "qot");
  qot->add_option("--span_km", rc.sim.qot.span_length_km)->check(positive);
  qot->add_option("--gosnr_c_db", rc.sim.qot.per_band_span_gosnr_db[band_index(Band::C)]);
  qot->add_option("--gosnr_l_db", rc.sim.qot.per_band_span_gosnr_db[band_index(Band::L)]);
  qot->add_option("--gosnr_s_db", rc.sim.qot.per_band_span_gosnr_db[band_index(Band::S)]);
  qot->add_option("--bpsk_threshold_db", rc.sim.qot.threshold_db[kBpskLevel]);

  auto* availability = config_section(app, "availability");
  availability->add_option("--a_th", rc.sim.availability.a_th)->check(open_unit);
  availability->add_option("--alpha_per_km", rc.topology.default_alpha_per_km)
      ->check(CLI::NonNegativeNumber);

  auto* protection = config_section(app, "protection");
  protection->add_option("--policy", policy)
      ->check(CLI::IsMember({"block", "admit-unprotected"}));

  auto* output = config_section(app, "output");
  output->add_option("--csv", rc.out_csv);
  output->add_option("--event_log", rc.event_log_path);
}

}  // namespace detail

/// Loads and validates a TOML-style config file; optional overrides replace
/// the seed list / CSV path the way the CLI flags do.
inline RunConfig load_config(const std::string& path,
                             std::optional<std::uint64_t> seed_override = {},
                             std::optional<std::string> out_override = {}) {
  if (!std::filesystem::exists(path)) throw std::runtime_error("config not found: " + path);

  RunConfig rc;
  std::string policy = "block";
  CLI::App app{"mbnetsim run configuration"};
  app.allow_config_extras(false);
  app.set_config("--config")->required();
  detail::attach_config_options(app, rc, policy);

  std::vector<std::string> argv{"--config", path};
  std::reverse(argv.begin(), argv.end());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    throw std::runtime_error("config error in " + path + ": " + e.what());
  }

  rc.sim.on_no_backup = policy == "block" ? SimulationConfig::OnNoBackup::block
                                          : SimulationConfig::OnNoBackup::admit_unprotected;
  if (seed_override) rc.sweep.seeds = {*seed_override};
  if (out_override) rc.out_csv = *out_override;

  if (rc.traffic.slots_max < rc.traffic.slots_min) {
    throw std::runtime_error("config error: traffic.slots_max below traffic.slots_min");
  }
  rc.sweep.validate();
  rc.sim.qot.validate();
  rc.sim.availability.validate();
  if (!std::filesystem::exists(rc.topology_path)) {
    // Also accept paths relative to the config file's directory.
    auto relative = std::filesystem::path(path).parent_path() / rc.topology_path;
    if (!std::filesystem::exists(relative)) {
      throw std::runtime_error("topology file not found: " + rc.topology_path);
    }
    rc.topology_path = relative.string();
  }
  return rc;
}

}  // namespace mbnetsim
