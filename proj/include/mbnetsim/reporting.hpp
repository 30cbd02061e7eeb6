#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "mbnetsim/engine.hpp"

namespace mbnetsim {

/// A sweepable configuration point: which bands carry traffic and how
/// backups are provisioned.
struct Scenario {
  std::string name;
  std::vector<Band> working_bands;
  ProtectionMode protection = ProtectionMode::none;
};

inline const std::vector<Scenario>& builtin_scenarios() {
  static const std::vector<Scenario> table{
      {"c-only", {Band::C}, ProtectionMode::none},
      {"c+l", {Band::C, Band::L}, ProtectionMode::none},
      {"c+l+s-shared", {Band::C, Band::L}, ProtectionMode::shared},
      {"c+l+s-dedicated", {Band::C, Band::L}, ProtectionMode::dedicated},
  };
  return table;
}

inline const Scenario* find_scenario(const std::string& name) {
  for (const auto& s : builtin_scenarios()) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

struct SweepSpec {
  std::vector<std::string> scenarios;
  std::vector<double> loads;
  std::uint64_t requests_per_point = 10000;
  std::vector<std::uint64_t> seeds{1};

  void validate() const {
    if (scenarios.empty()) throw std::invalid_argument("sweep needs at least one scenario");
    if (loads.empty()) throw std::invalid_argument("sweep needs at least one load");
    if (seeds.empty()) throw std::invalid_argument("sweep needs at least one seed");
    if (requests_per_point < 1) throw std::invalid_argument("requests_per_point must be >= 1");
    for (const auto& s : scenarios) {
      if (!find_scenario(s)) throw std::invalid_argument("unknown scenario '" + s + "'");
    }
    for (double l : loads) {
      if (!(l > 0.0)) throw std::invalid_argument("loads must be positive");
    }
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      for (std::size_t j = i + 1; j < seeds.size(); ++j) {
        if (seeds[i] == seeds[j]) throw std::invalid_argument("seeds must be distinct");
      }
    }
  }
};

/// One CSV row: a (scenario, load, seed) point.
struct ScenarioMetrics {
  std::string scenario;
  double load_erlang = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t offered = 0;
  std::uint64_t blocked = 0;
  double blocking_probability = 0.0;
  double util_c_mean = 0.0, util_l_mean = 0.0, util_s_mean = 0.0;
  double util_c_peak = 0.0, util_l_peak = 0.0, util_s_peak = 0.0;
  double backup_share_factor = 1.0;
  double restorability = 1.0;
  double runtime_s = 0.0;
};

inline constexpr const char* kCsvHeader =
    "scenario,load_erlang,seed,offered,blocked,blocking_probability,"
    "util_C_mean,util_L_mean,util_S_mean,util_C_peak,util_L_peak,util_S_peak,"
    "backup_share_factor,restorability,runtime_s";

/// Decimal with up to 12 significant digits, no locale.
inline std::string format_sig(double v, int digits = 12) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

using SweepProgress = std::function<void(std::size_t done, std::size_t total)>;

/// Runs every (scenario, load, seed) point on an isolated engine state and
/// returns rows in deterministic scenario-major order. Points run on up to
/// `threads` workers unless an event log forces sequential execution.
inline std::vector<ScenarioMetrics> run_sweep(const Network& net, const SweepSpec& spec,
                                              const SimulationConfig& base,
                                              const TrafficModel& base_traffic,
                                              unsigned threads = std::thread::hardware_concurrency(),
                                              std::ostream* event_log = nullptr,
                                              const SweepProgress& progress = {}) {
  spec.validate();
  struct Point {
    const Scenario* scenario;
    double load;
    std::uint64_t seed;
  };
  std::vector<Point> points;
  for (const auto& name : spec.scenarios) {
    for (double load : spec.loads) {
      for (std::uint64_t seed : spec.seeds) points.push_back({find_scenario(name), load, seed});
    }
  }

  std::vector<ScenarioMetrics> rows(points.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};

  auto run_point = [&](std::size_t i) {
    const Point& p = points[i];
    SimulationConfig cfg = base;
    cfg.working_bands = p.scenario->working_bands;
    cfg.protection = p.scenario->protection;
    TrafficModel traffic = base_traffic;
    traffic.arrival_rate = p.load / traffic.mean_holding;
    traffic.seed = p.seed;

    auto t0 = std::chrono::steady_clock::now();
    if (event_log) {
      (*event_log) << "# scenario=" << p.scenario->name << " load=" << format_sig(p.load)
                   << " seed=" << p.seed << '\n';
    }
    RunMetrics m = Simulation::run(net, cfg, traffic, spec.requests_per_point, event_log);
    auto t1 = std::chrono::steady_clock::now();

    ScenarioMetrics row;
    row.scenario = p.scenario->name;
    row.load_erlang = p.load;
    row.seed = p.seed;
    row.offered = m.offered;
    row.blocked = m.blocked;
    row.blocking_probability = m.blocking_probability;
    row.util_c_mean = m.util_mean[band_index(Band::C)];
    row.util_l_mean = m.util_mean[band_index(Band::L)];
    row.util_s_mean = m.util_mean[band_index(Band::S)];
    row.util_c_peak = m.util_peak[band_index(Band::C)];
    row.util_l_peak = m.util_peak[band_index(Band::L)];
    row.util_s_peak = m.util_peak[band_index(Band::S)];
    row.backup_share_factor = m.backup_share_factor;
    row.restorability = m.restorability;
    row.runtime_s = std::chrono::duration<double>(t1 - t0).count();
    rows[i] = std::move(row);
    if (progress) progress(++done, points.size());
  };

  unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(points.size())));
  if (event_log) workers = 1;  // keep the log sequential and deterministic
  if (workers == 1) {
    for (std::size_t i = 0; i < points.size(); ++i) run_point(i);
  } else {
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < points.size(); i = next.fetch_add(1)) {
          try {
            run_point(i);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }
  return rows;
}

inline void write_csv(const std::vector<ScenarioMetrics>& rows, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.scenario << ',' << format_sig(r.load_erlang) << ',' << r.seed << ',' << r.offered
        << ',' << r.blocked << ',' << format_sig(r.blocking_probability) << ','
        << format_sig(r.util_c_mean) << ',' << format_sig(r.util_l_mean) << ','
        << format_sig(r.util_s_mean) << ',' << format_sig(r.util_c_peak) << ','
        << format_sig(r.util_l_peak) << ',' << format_sig(r.util_s_peak) << ','
        << format_sig(r.backup_share_factor) << ',' << format_sig(r.restorability) << ','
        << format_sig(r.runtime_s) << '\n';
  }
}

inline void write_csv_file(const std::vector<ScenarioMetrics>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write CSV to " + path);
  write_csv(rows, out);
}

inline std::vector<ScenarioMetrics> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV");
  if (line != kCsvHeader) throw std::runtime_error("unexpected CSV header: " + line);
  std::vector<ScenarioMetrics> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (cells.size() != 15) throw std::runtime_error("bad CSV row: " + line);
    ScenarioMetrics r;
    r.scenario = cells[0];
    r.load_erlang = std::stod(cells[1]);
    r.seed = std::stoull(cells[2]);
    r.offered = std::stoull(cells[3]);
    r.blocked = std::stoull(cells[4]);
    r.blocking_probability = std::stod(cells[5]);
    r.util_c_mean = std::stod(cells[6]);
    r.util_l_mean = std::stod(cells[7]);
    r.util_s_mean = std::stod(cells[8]);
    r.util_c_peak = std::stod(cells[9]);
    r.util_l_peak = std::stod(cells[10]);
    r.util_s_peak = std::stod(cells[11]);
    r.backup_share_factor = std::stod(cells[12]);
    r.restorability = std::stod(cells[13]);
    r.runtime_s = std::stod(cells[14]);
    rows.push_back(std::move(r));
  }
  return rows;
}

struct SummaryRow {
  std::string scenario;
  double load_erlang = 0.0;
  std::size_t seeds = 0;
  double bp_mean = 0.0;
  double bp_std = 0.0;  // sample standard deviation; 0 for a single seed
};

/// Groups rows by (scenario, load) in first-appearance order and reduces the
/// blocking probability over seeds.
inline std::vector<SummaryRow> summarize(const std::vector<ScenarioMetrics>& rows) {
  if (rows.empty()) throw std::invalid_argument("summarize needs at least one row");
  std::vector<SummaryRow> out;
  std::vector<std::vector<double>> samples;
  for (const auto& r : rows) {
    std::size_t g = 0;
    for (; g < out.size(); ++g) {
      if (out[g].scenario == r.scenario && out[g].load_erlang == r.load_erlang) break;
    }
    if (g == out.size()) {
      out.push_back({r.scenario, r.load_erlang, 0, 0.0, 0.0});
      samples.emplace_back();
    }
    samples[g].push_back(r.blocking_probability);
  }
  for (std::size_t g = 0; g < out.size(); ++g) {
    const auto& v = samples[g];
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    if (v.size() > 1) {
      for (double x : v) var += (x - mean) * (x - mean);
      var /= static_cast<double>(v.size() - 1);
    }
    out[g].seeds = v.size();
    out[g].bp_mean = mean;
    out[g].bp_std = std::sqrt(var);
  }
  return out;
}

}  // namespace mbnetsim
