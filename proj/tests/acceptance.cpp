// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Run via `ctest -R acceptance` or directly from the build tree.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mbnetsim/config.hpp"
#include "mbnetsim/reporting.hpp"
#include "support/test_util.hpp"

using namespace mbnetsim;

namespace {

struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& what) {
  if (!cond) throw CheckFailure(what);
}

Network nsfnet() { return load_topology_file(testutil::data_path("nsfnet.json")); }

// --- criterion 1 -----------------------------------------------------------

void band_constants() {
  require(band_capacity(Band::C) == 320, "C capacity != 320");
  require(band_capacity(Band::L) == 548, "L capacity != 548");
  require(band_capacity(Band::S) == 732, "S capacity != 732");
  require(band_capacity(Band::C) + band_capacity(Band::L) == 868, "C+L != 868");
}

// --- criterion 2 -----------------------------------------------------------

void availability_formula() {
  std::mt19937_64 rng(20240213);
  int paths_checked = 0;
  while (paths_checked < 1000) {
    Network net = testutil::random_connected_network(rng, 8, 0.4, true);
    for (int pair = 0; pair < 10 && paths_checked < 1000; ++pair) {
      auto s = static_cast<NodeId>(rng() % net.node_count());
      auto d = static_cast<NodeId>(rng() % net.node_count());
      if (s == d) continue;
      auto p = shortest_path(net, s, d);
      if (!p) continue;
      double got = path_availability(net, *p);
      // Independent fold: long double product over the reversed edge list.
      long double want = 1.0L;
      for (auto it = p->edges.rbegin(); it != p->edges.rend(); ++it) {
        want *= static_cast<long double>(net.edge(*it).availability);
      }
      require(std::abs(got - static_cast<double>(want)) <= 1e-12,
              "availability product deviates from independent fold");
      require(got > 0.0 && got <= 1.0, "availability outside (0,1]");
      ++paths_checked;
    }
  }
}

// --- criterion 3 -----------------------------------------------------------

void routing_oracle() {
  std::mt19937_64 rng(777001);
  for (int instance = 0; instance < 100; ++instance) {
    Network net = testutil::random_connected_network(rng, 8, 0.5);
    auto s = static_cast<NodeId>(rng() % net.node_count());
    auto d = static_cast<NodeId>(rng() % net.node_count());
    if (s == d) d = (d + 1) % static_cast<NodeId>(net.node_count());
    auto got = k_shortest_paths(net, s, d, 1000);
    auto want = testutil::enumerate_simple_paths(net, s, d);
    require(got.size() == want.size(), "k-shortest path count mismatch vs brute force");
    for (std::size_t i = 0; i < got.size(); ++i) {
      require(got[i].edges == want[i].edges, "path sequence mismatch vs brute force");
      require(got[i].cost_km == want[i].cost_km, "path cost mismatch vs brute force");
      require(got[i].nodes == want[i].nodes, "path node mismatch vs brute force");
    }
  }
}

// --- criterion 4 -----------------------------------------------------------

void first_fit_oracle() {
  std::mt19937_64 rng(424242);
  for (int instance = 0; instance < 500; ++instance) {
    bool single_edge = instance % 2 == 0;
    Network net = single_edge ? testutil::line_network({120.0})
                              : testutil::line_network({120.0, 120.0, 120.0});
    Path path = *shortest_path(net, 0, single_edge ? 1 : 3);
    Band band = kAllBands[rng() % 3];
    LightpathId id = 1;
    int fills = 10 + static_cast<int>(rng() % 60);
    for (int f = 0; f < fills; ++f) {
      auto e = path.edges[rng() % path.edges.size()];
      int width = 1 + static_cast<int>(rng() % 8);
      int start = static_cast<int>(rng() % static_cast<std::uint64_t>(band_capacity(band) - width));
      bool free = true;
      for (int slot = start; slot < start + width; ++slot) {
        free &= net.occupancy(e, band).is_free(slot);
      }
      if (free) allocate(net, testutil::single_edge_path(net, e), band, {start, width}, id++, false);
    }
    int width = 1 + static_cast<int>(rng() % 12);
    auto got = ::mbnetsim::first_fit(net, path, band, width);
    auto want = testutil::first_fit_oracle(net, path, band, width);
    require(got == want, "first_fit start differs from exhaustive scan");
  }
}

// --- criterion 5 -----------------------------------------------------------

void spectrum_conservation() {
  SimulationConfig cfg;
  cfg.protection = ProtectionMode::shared;
  Simulation sim(testutil::ring_network(5, 50.0, 0.99), cfg);
  std::string initial = dump_occupancy(sim.network());

  std::mt19937_64 rng(5150);
  std::vector<LightpathId> live;
  auto scan_working_owners = [&] {
    for (const auto& e : sim.network().edges()) {
      for (Band b : kWorkingBands) {
        const auto& occ = sim.network().occupancy(e.id, b);
        for (int slot = 0; slot < occ.capacity(); ++slot) {
          require(occ.owners(slot).size() <= 1, "working slot with two owners");
        }
      }
    }
  };

  for (int event = 0; event < 10000; ++event) {
    if (live.empty() || rng() % 5 < 3) {
      LightpathRequest req;
      req.s = static_cast<NodeId>(rng() % 5);
      req.d = static_cast<NodeId>((req.s + 1 + rng() % 4) % 5);
      req.requested_slots = 2 + static_cast<int>(rng() % 7);
      req.k = 2;
      auto decision = sim.admit(req);
      if (decision.accepted) live.push_back(decision.working_id);
    } else {
      auto pick = rng() % live.size();
      sim.depart(live[pick]);
      live.erase(live.begin() + static_cast<long>(pick));
    }
    scan_working_owners();
  }
  for (LightpathId id : live) sim.depart(id);
  require(dump_occupancy(sim.network()) == initial, "occupancy differs from initial snapshot");
  require(sim.network().allocations().empty(), "allocation registry not empty at the end");
}

// --- criterion 6 -----------------------------------------------------------

void band_roles() {
  Network net = nsfnet();
  SimulationConfig cfg;
  cfg.protection = ProtectionMode::shared;
  TrafficModel traffic;
  traffic.arrival_rate = 200.0;
  traffic.seed = 31;

  Simulation sim(net, cfg);
  sim.offer_traffic(traffic, 10000);
  std::uint64_t backups_seen = 0;
  while (sim.process_next_event()) {
    for (const auto& [id, lp] : sim.actives()) {
      if (lp.role == LightpathRole::working) {
        require(lp.band == Band::C || lp.band == Band::L, "working lightpath outside C/L");
      } else {
        require(lp.band == Band::S, "backup lightpath outside S");
        ++backups_seen;
      }
      const auto& alloc = sim.network().allocations().at(id);
      require(alloc.band == lp.band, "allocation band mismatch");
      require(alloc.range == lp.range, "allocation range mismatch");
    }
  }
  require(backups_seen > 0, "protected run never carried a backup");
}

// --- criterion 7 -----------------------------------------------------------

void sharing_condition() {
  Network net = nsfnet();
  SimulationConfig cfg;
  cfg.protection = ProtectionMode::shared;
  TrafficModel traffic;
  traffic.arrival_rate = 200.0;
  traffic.seed = 31;

  Simulation sim(net, cfg);
  sim.offer_traffic(traffic, 10000);
  std::uint64_t provision_events = 0;
  while (auto ev = sim.process_next_event()) {
    if (ev->decision && ev->decision->accepted && ev->decision->backup_id) {
      ++provision_events;
      require(backup_sharing_consistent(sim.network(), sim.backup_lookup()),
              "share table holds a non-disjoint pair");
    }
  }
  require(provision_events > 100, "protected run provisioned too few backups to be meaningful");
}

void shared_vs_dedicated_usage() {
  Network net = nsfnet();
  TrafficModel traffic;
  traffic.arrival_rate = 30.0;
  traffic.seed = 17;

  auto run_mode = [&](ProtectionMode mode, std::vector<LightpathId>& accepted, double& s_mean,
                      double& share) {
    SimulationConfig cfg;
    cfg.protection = mode;
    Simulation sim(net, cfg);
    sim.offer_traffic(traffic, 3000);
    while (auto ev = sim.process_next_event()) {
      if (ev->decision && ev->decision->accepted) accepted.push_back(ev->decision->working_id);
    }
    auto m = sim.metrics();
    s_mean = m.util_mean[band_index(Band::S)];
    share = m.backup_share_factor;
  };

  std::vector<LightpathId> acc_shared, acc_dedicated;
  double s_shared = 0, s_dedicated = 0, share_shared = 1, share_dedicated = 1;
  run_mode(ProtectionMode::shared, acc_shared, s_shared, share_shared);
  run_mode(ProtectionMode::dedicated, acc_dedicated, s_dedicated, share_dedicated);

  require(acc_shared == acc_dedicated,
          "accepted sets diverged; comparison load is no longer like-for-like");
  require(s_shared <= s_dedicated + 1e-15, "shared mode used more S slot-edge units");
  require(share_shared >= 1.0 && share_dedicated >= 1.0, "share factor below 1");
  require(share_dedicated <= 1.0 + 1e-12, "dedicated mode shows sharing");
}

// --- criterion 8 -----------------------------------------------------------

void protection_guarantee() {
  Network net = nsfnet();
  SimulationConfig cfg;
  cfg.protection = ProtectionMode::shared;
  TrafficModel traffic;
  traffic.arrival_rate = 200.0;
  traffic.seed = 63;

  Simulation warm(net, cfg);
  warm.offer_traffic(traffic, 3000);
  warm.process_until_offered(3000);
  require(!warm.actives().empty(), "warm-up left no active lightpaths");

  std::uint64_t protected_affected_total = 0;
  for (const auto& e : net.edges()) {
    Simulation sim = warm;  // snapshot per failure
    std::set<LightpathId> expect_restored;
    std::set<LightpathId> expect_affected;
    for (const auto& [wid, rec] : sim.records()) {
      if (rec.active != ActivePath::working) continue;
      const auto& lp = sim.actives().at(wid);
      if (!lp.path.uses_edge(e.id)) continue;
      expect_affected.insert(wid);
      if (rec.backup_id) expect_restored.insert(wid);
    }
    FailureReport report = sim.inject_failure(e.id);
    require(report.affected() == expect_affected.size(), "affected != restored + lost");
    std::set<LightpathId> got_restored(report.restored.begin(), report.restored.end());
    std::set<LightpathId> got_lost(report.lost.begin(), report.lost.end());
    require(got_restored.size() + got_lost.size() == expect_affected.size(),
            "restored and lost do not partition the affected set");
    for (LightpathId id : expect_restored) {
      require(got_restored.count(id) == 1, "protected lightpath on failed edge not restored");
    }
    for (LightpathId id : got_restored) {
      require(expect_restored.count(id) == 1, "restored lightpath was not protected");
      require(sim.records().at(id).active == ActivePath::backup, "restored record not on backup");
    }
    protected_affected_total += expect_restored.size();
  }
  require(protected_affected_total > 0, "no protected lightpath was ever affected");
}

// --- criterion 9 -----------------------------------------------------------

void capacity_gain_direction() {
  Network net = nsfnet();
  SweepSpec spec;
  spec.scenarios = {"c-only", "c+l"};
  spec.loads = {100.0, 200.0, 300.0};
  spec.requests_per_point = 10000;
  spec.seeds = {1, 2, 3};
  SimulationConfig base;
  TrafficModel traffic;
  auto rows = run_sweep(net, spec, base, traffic);
  auto summary = summarize(rows);

  auto mean_bp = [&](const std::string& scenario, double load) {
    for (const auto& s : summary) {
      if (s.scenario == scenario && s.load_erlang == load) return s.bp_mean;
    }
    throw CheckFailure("missing summary row");
  };
  for (double load : spec.loads) {
    require(mean_bp("c+l", load) <= mean_bp("c-only", load),
            "adding the L band failed to reduce mean blocking at load " + format_sig(load));
  }
  for (const auto& scenario : spec.scenarios) {
    double prev = -1.0;
    for (double load : spec.loads) {
      double bp = mean_bp(scenario, load);
      require(bp >= prev, "blocking probability decreased with load in " + scenario);
      prev = bp;
    }
  }
}

// --- criterion 10 ----------------------------------------------------------

void qot_model_checks() {
  QotParams params;
  for (int n = 1; n <= 64; ++n) {
    Network net = testutil::line_network(std::vector<double>(static_cast<std::size_t>(n), 80.0));
    Path p = *shortest_path(net, 0, static_cast<NodeId>(n));
    for (Band b : kAllBands) {
      double got = path_gosnr(net, p, b, params).gosnr_db;
      double want = params.span_gosnr_db(b) - 10.0 * std::log10(static_cast<double>(n));
      require(std::abs(got - want) <= 1e-9, "equal-span GOSNR identity violated");
    }
  }
  std::mt19937_64 rng(9001);
  for (int instance = 0; instance < 1000; ++instance) {
    std::size_t hops = 1 + rng() % 10;
    std::vector<double> lengths;
    for (std::size_t i = 0; i <= hops; ++i) {
      lengths.push_back(5.0 + static_cast<double>(rng() % 4000) / 10.0);
    }
    Network net = testutil::line_network(lengths);
    Band b = kAllBands[rng() % 3];
    double shorter = path_gosnr(net, *shortest_path(net, 0, static_cast<NodeId>(hops)), b, params).gosnr_db;
    double longer = path_gosnr(net, *shortest_path(net, 0, static_cast<NodeId>(hops + 1)), b, params).gosnr_db;
    require(longer <= shorter + 1e-12, "GOSNR increased when the path was extended");
  }
}

// --- criterion 11 ----------------------------------------------------------

std::string strip_runtime_column(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    auto cut = line.rfind(',');
    out << line.substr(0, cut) << '\n';
  }
  return out.str();
}

void determinism() {
  Network net = nsfnet();
  SweepSpec spec;
  spec.scenarios = {"c+l+s-shared"};
  spec.loads = {200.0};
  spec.requests_per_point = 10000;
  spec.seeds = {42};
  SimulationConfig base;
  TrafficModel traffic;

  std::ostringstream a, b;
  write_csv(run_sweep(net, spec, base, traffic), a);
  write_csv(run_sweep(net, spec, base, traffic), b);
  require(strip_runtime_column(a.str()) == strip_runtime_column(b.str()),
          "CSV differs between consecutive identical runs");
  require(a.str().find("c+l+s-shared,200,42,10000,") != std::string::npos,
          "CSV row does not carry the expected point prefix");
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    std::function<void()> body;
  };
  const std::vector<Criterion> criteria{
      {1, "band constants 320/548/732, C+L = 868", band_constants},
      {2, "path availability equals independent product fold (1e-12)", availability_formula},
      {3, "k-shortest paths equal brute-force enumeration on 100 small graphs", routing_oracle},
      {4, "first-fit equals exhaustive minimal-start scan on 500 states", first_fit_oracle},
      {5, "spectrum conservation over 10^4 admit/depart events", spectrum_conservation},
      {6, "band roles hold across a 10^4-request protected run", band_roles},
      {7, "sharing stays disjoint; shared S usage <= dedicated",
       [] {
         sharing_condition();
         shared_vs_dedicated_usage();
       }},
      {8, "every protected lightpath survives each single-edge failure", protection_guarantee},
      {9, "mean BP(c+l) <= mean BP(c-only), BP nondecreasing in load", capacity_gain_direction},
      {10, "GOSNR identity within 1e-9 dB and monotone under extension", qot_model_checks},
      {11, "identical (config, seed) reproduce the CSV byte-for-byte", determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    std::string error;
    try {
      c.body();
    } catch (const std::exception& e) {
      error = e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (error.empty()) {
      std::printf("PASS criterion %2d: %s (%.2f s)\n", c.number, c.name, secs);
    } else {
      ++failures;
      std::printf("FAIL criterion %2d: %s (%.2f s) -- %s\n", c.number, c.name, secs, error.c_str());
    }
    std::fflush(stdout);
  }
  if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
