#pragma once

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <queue>
#include <random>
#include <tuple>

#include "mbnetsim/protection.hpp"

namespace mbnetsim {

/// Self-contained RNG wrapper so seeded runs do not depend on the standard
/// library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, 1).
  double next_unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double exponential(double mean) { return -mean * std::log(1.0 - next_unit()); }

  /// Uniform integer in [lo, hi], unbiased.
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
    std::uint64_t span = hi - lo + 1;
    std::uint64_t limit = (~std::uint64_t{0} / span) * span;
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return lo + x % span;
  }

 private:
  std::mt19937_64 gen_;
};

struct LightpathRequest {
  NodeId s = 0;
  NodeId d = 0;
  int requested_slots = 1;
  int k = 1;
  int m = kBpskLevel;
};

struct TrafficModel {
  double arrival_rate = 1.0;  // lambda, arrivals per time unit
  double mean_holding = 1.0;  // 1/mu
  int slots_min = 2;
  int slots_max = 8;
  int k = 3;
  std::uint64_t seed = 1;

  double load_erlang() const { return arrival_rate * mean_holding; }

  void validate() const {
    if (!(arrival_rate > 0.0)) throw std::invalid_argument("arrival_rate must be positive");
    if (!(mean_holding > 0.0)) throw std::invalid_argument("mean_holding must be positive");
    if (slots_min < 1 || slots_max < slots_min) {
      throw std::invalid_argument("slot distribution needs 1 <= slots_min <= slots_max");
    }
    if (k < 1) throw std::invalid_argument("k must be >= 1");
  }
};

enum class BlockReason { none, no_spectrum_or_qot, no_protection };

inline const char* block_reason_name(BlockReason r) {
  switch (r) {
    case BlockReason::none: return "none";
    case BlockReason::no_spectrum_or_qot: return "no-spectrum-or-qot";
    case BlockReason::no_protection: return "no-protection";
  }
  return "?";
}

struct AdmissionDecision {
  bool accepted = false;
  LightpathId working_id = 0;
  std::optional<LightpathId> backup_id;
  Band band = Band::C;
  SlotRange range;
  double a_w = 1.0;
  BlockReason reason = BlockReason::none;
};

struct SimulationConfig {
  std::vector<Band> working_bands{Band::C, Band::L};
  ProtectionMode protection = ProtectionMode::none;
  enum class OnNoBackup { block, admit_unprotected };
  OnNoBackup on_no_backup = OnNoBackup::block;
  SpectrumPolicy spectrum;
  QotParams qot;
  AvailabilityConfig availability;
};

struct RunMetrics {
  std::uint64_t offered = 0;
  std::uint64_t accepted = 0;
  std::uint64_t blocked = 0;
  std::uint64_t blocked_no_spectrum_or_qot = 0;
  std::uint64_t blocked_no_protection = 0;
  double blocking_probability = 0.0;
  std::array<double, 3> util_mean{};  // occupied slot-edge fraction per band
  std::array<double, 3> util_peak{};
  double backup_share_factor = 1.0;  // mean owners per occupied S slot-edge
  double restorability = 1.0;        // restored / affected over all failures
  std::uint64_t failures_affected = 0;
  std::uint64_t failures_restored = 0;
  std::uint64_t failures_lost = 0;
  double sim_end_time = 0.0;
};

enum class EventKind { arrival, departure, failure, repair };

/// One isolated simulation run: the network, every active lightpath and
/// protection record, the event queue, and the metric integrals. Copying a
/// Simulation snapshots the entire run state.
class Simulation {
 public:
  struct ProcessedEvent {
    EventKind kind = EventKind::arrival;
    double time = 0.0;
    std::optional<AdmissionDecision> decision;  // arrivals only
    LightpathId lightpath = 0;                  // departures only
    EdgeId edge = 0;                            // failures/repairs only
  };

  Simulation(Network net, SimulationConfig cfg) : net_(std::move(net)), cfg_(std::move(cfg)) {
    cfg_.qot.validate();
    cfg_.availability.validate();
    if (cfg_.spectrum.guard_band_slots < 0) {
      throw std::invalid_argument("guard_band_slots must be >= 0");
    }
    if (cfg_.working_bands.empty()) throw std::invalid_argument("no working bands configured");
    for (Band b : cfg_.working_bands) {
      if (b == Band::S) throw std::invalid_argument("S band is reserved for backups");
    }
    failed_.assign(net_.edge_count(), 0);
    refresh_occupancy();
  }

  const Network& network() const { return net_; }
  double now() const { return now_; }
  const std::map<LightpathId, Lightpath>& actives() const { return actives_; }
  const std::map<LightpathId, ProtectionRecord>& records() const { return records_; }

  void set_event_log(std::ostream* sink) { event_log_ = sink; }

  /// Full admission pipeline for one request at the current simulation time.
  AdmissionDecision admit(const LightpathRequest& request) {
    if (!net_.has_node(request.s) || !net_.has_node(request.d)) {
      throw TopologyError("unknown node in request");
    }
    if (request.s == request.d) throw std::invalid_argument("request needs s != d");
    if (request.requested_slots < 1) throw std::invalid_argument("requested_slots must be >= 1");

    ++offered_;
    AdmissionDecision decision;
    decision.working_id = next_id_++;
    log_line("ARRIVE id=", decision.working_id, " s=", request.s, " d=", request.d,
             " slots=", request.requested_slots);

    const int width = alloc_width(request.requested_slots, cfg_.spectrum);
    for (const Path& path : candidate_paths(request.s, request.d, request.k)) {
      for (Band band : cfg_.working_bands) {
        auto range = first_fit(net_, path, band, width);
        if (!range) continue;
        if (!path_gosnr(net_, path, band, cfg_.qot, request.m).acceptable) continue;

        allocate(net_, path, band, *range, decision.working_id, false);
        Lightpath working;
        working.id = decision.working_id;
        working.path = path;
        working.band = band;
        working.range = *range;
        working.role = LightpathRole::working;

        decision.a_w = path_availability(net_, path);
        ProtectionRecord record;
        record.working_id = working.id;
        record.a_w = decision.a_w;

        if (cfg_.protection != ProtectionMode::none &&
            needs_backup(decision.a_w, cfg_.availability)) {
          BackupQuery query{width, request.k, cfg_.protection, request.m};
          auto backup = provision_backup(net_, routing_view(), working, next_id_, query,
                                         cfg_.qot, backup_lookup());
          if (backup) {
            ++next_id_;
            record.backup_id = backup->id;
            decision.backup_id = backup->id;
            actives_.emplace(backup->id, std::move(*backup));
          } else if (cfg_.on_no_backup == SimulationConfig::OnNoBackup::block) {
            release(net_, working.id);
            ++blocked_;
            ++blocked_no_protection_;
            decision.accepted = false;
            decision.reason = BlockReason::no_protection;
            log_line("BLOCK id=", decision.working_id,
                     " reason=", block_reason_name(decision.reason));
            refresh_occupancy();
            return decision;
          }
        }

        decision.accepted = true;
        decision.band = band;
        decision.range = *range;
        actives_.emplace(working.id, std::move(working));
        records_.emplace(record.working_id, record);
        ++accepted_;
        log_line("ACCEPT id=", decision.working_id, " band=", band_name(band),
                 " start=", range->start, " width=", range->width, " aw=", decision.a_w);
        if (decision.backup_id) {
          const auto& b = actives_.at(*decision.backup_id);
          log_line("BACKUP id=", decision.working_id, " start=", b.range.start,
                   " width=", b.range.width);
        }
        refresh_occupancy();
        return decision;
      }
    }

    ++blocked_;
    ++blocked_no_spectrum_or_qot_;
    decision.accepted = false;
    decision.reason = BlockReason::no_spectrum_or_qot;
    log_line("BLOCK id=", decision.working_id, " reason=", block_reason_name(decision.reason));
    return decision;
  }

  /// Tears down an accepted working lightpath and its backup, if any.
  void depart(LightpathId working_id) {
    auto it = actives_.find(working_id);
    if (it == actives_.end() || it->second.role != LightpathRole::working) {
      throw std::invalid_argument("depart of unknown working lightpath " +
                                  std::to_string(working_id));
    }
    auto rec = records_.find(working_id);
    release(net_, working_id);
    if (rec != records_.end() && rec->second.backup_id) {
      release(net_, *rec->second.backup_id);
      actives_.erase(*rec->second.backup_id);
    }
    actives_.erase(it);
    if (rec != records_.end()) records_.erase(rec);
    log_line("DEPART id=", working_id);
    refresh_occupancy();
  }

  /// Single-edge failure: switch every protected lightpath crossing the edge
  /// to its backup and exclude the edge from subsequent routing.
  FailureReport inject_failure(EdgeId edge) {
    std::size_t pos = edge_pos(edge);
    if (failed_[pos]) throw std::invalid_argument("edge " + std::to_string(edge) + " already failed");
    failed_[pos] = 1;
    ++topology_version_;
    route_cache_.clear();
    log_line("FAIL edge=", edge);
    auto report = switchover(
        records_,
        [this](LightpathId id) -> const Lightpath* {
          auto it = actives_.find(id);
          return it == actives_.end() ? nullptr : &it->second;
        },
        edge);
    failures_affected_ += report.affected();
    failures_restored_ += report.restored.size();
    failures_lost_ += report.lost.size();
    return report;
  }

  void repair(EdgeId edge) {
    std::size_t pos = edge_pos(edge);
    if (!failed_[pos]) throw std::invalid_argument("edge " + std::to_string(edge) + " is not failed");
    failed_[pos] = 0;
    ++topology_version_;
    route_cache_.clear();
  }

  bool edge_failed(EdgeId edge) const { return failed_[edge_pos(edge)] != 0; }

  /// Draws n requests from the seeded stream and enqueues their arrivals.
  /// The draw order per request is fixed (gap, s, d, slots, holding) so the
  /// stream is identical across scenario variants.
  void offer_traffic(const TrafficModel& traffic, std::uint64_t n_requests) {
    traffic.validate();
    if (net_.node_count() < 2) throw std::invalid_argument("traffic needs at least two nodes");
    Rng rng(traffic.seed);
    double t = now_;
    const auto n = static_cast<std::uint64_t>(net_.node_count());
    for (std::uint64_t i = 0; i < n_requests; ++i) {
      t += rng.exponential(1.0 / traffic.arrival_rate);
      PendingArrival a;
      a.time = t;
      a.request.s = static_cast<NodeId>(rng.uniform_int(0, n - 1));
      auto d = static_cast<NodeId>(rng.uniform_int(0, n - 2));
      a.request.d = d >= a.request.s ? d + 1 : d;
      a.request.requested_slots = static_cast<int>(
          rng.uniform_int(static_cast<std::uint64_t>(traffic.slots_min),
                          static_cast<std::uint64_t>(traffic.slots_max)));
      a.request.k = traffic.k;
      a.holding = rng.exponential(traffic.mean_holding);
      arrivals_.push_back(a);
      push_event(a.time, EventKind::arrival, arrivals_.size() - 1);
    }
  }

  void schedule_failure(double time, EdgeId edge) { push_event(time, EventKind::failure, edge); }
  void schedule_repair(double time, EdgeId edge) { push_event(time, EventKind::repair, edge); }

  /// Executes the next event; nullopt when the queue is drained.
  std::optional<ProcessedEvent> process_next_event() {
    if (queue_.empty()) return std::nullopt;
    Event ev = queue_.top();
    queue_.pop();
    advance_time(ev.time);

    ProcessedEvent done;
    done.kind = ev.kind;
    done.time = ev.time;
    switch (ev.kind) {
      case EventKind::arrival: {
        const PendingArrival& a = arrivals_[ev.payload];
        auto decision = admit(a.request);
        if (decision.accepted) {
          push_event(ev.time + a.holding, EventKind::departure, decision.working_id);
        }
        done.decision = decision;
        break;
      }
      case EventKind::departure:
        depart(static_cast<LightpathId>(ev.payload));
        done.lightpath = static_cast<LightpathId>(ev.payload);
        break;
      case EventKind::failure:
        inject_failure(static_cast<EdgeId>(ev.payload));
        done.edge = static_cast<EdgeId>(ev.payload);
        break;
      case EventKind::repair:
        repair(static_cast<EdgeId>(ev.payload));
        done.edge = static_cast<EdgeId>(ev.payload);
        break;
    }
    return done;
  }

  void process_all() {
    while (process_next_event()) {
    }
  }

  /// Processes events until `n` requests have been offered, leaving the rest
  /// of the queue (pending departures) in place. Gives a mid-flight state.
  void process_until_offered(std::uint64_t n) {
    while (offered_ < n && process_next_event()) {
    }
  }

  RunMetrics metrics() const {
    RunMetrics m;
    m.offered = offered_;
    m.accepted = accepted_;
    m.blocked = blocked_;
    m.blocked_no_spectrum_or_qot = blocked_no_spectrum_or_qot_;
    m.blocked_no_protection = blocked_no_protection_;
    m.blocking_probability = offered_ ? static_cast<double>(blocked_) / static_cast<double>(offered_) : 0.0;
    m.sim_end_time = now_;
    for (Band b : kAllBands) {
      auto i = static_cast<std::size_t>(band_index(b));
      auto total = static_cast<double>(net_.band_total_units(b));
      m.util_peak[i] = total > 0 ? static_cast<double>(occ_peak_[i]) / total : 0.0;
      m.util_mean[i] = (total > 0 && now_ > 0) ? occ_integral_[i] / (total * now_) : 0.0;
    }
    auto s = static_cast<std::size_t>(band_index(Band::S));
    m.backup_share_factor = occ_integral_[s] > 0 ? owner_integral_s_ / occ_integral_[s] : 1.0;
    m.failures_affected = failures_affected_;
    m.failures_restored = failures_restored_;
    m.failures_lost = failures_lost_;
    m.restorability = failures_affected_
                          ? static_cast<double>(failures_restored_) / static_cast<double>(failures_affected_)
                          : 1.0;
    return m;
  }

  /// Convenience wrapper: offered traffic, full event processing, metrics.
  static RunMetrics run(Network net, SimulationConfig cfg, const TrafficModel& traffic,
                        std::uint64_t n_requests, std::ostream* event_log = nullptr) {
    Simulation sim(std::move(net), std::move(cfg));
    sim.set_event_log(event_log);
    sim.offer_traffic(traffic, n_requests);
    sim.process_all();
    return sim.metrics();
  }

  /// Routing view excluding failed edges.
  NetworkView routing_view() const {
    NetworkView view(net_);
    for (const auto& e : net_.edges()) {
      if (failed_[edge_pos(e.id)]) view.exclude_edge(e.id);
    }
    return view;
  }

  /// k-shortest candidates, cached per (s, d, k) until the topology changes.
  const std::vector<Path>& candidate_paths(NodeId s, NodeId d, int k) {
    if (cache_version_ != topology_version_) {
      route_cache_.clear();
      cache_version_ = topology_version_;
    }
    auto key = std::tuple<NodeId, NodeId, int>(s, d, k);
    auto it = route_cache_.find(key);
    if (it == route_cache_.end()) {
      it = route_cache_.emplace(key, k_shortest_paths(routing_view(), s, d, k)).first;
    }
    return it->second;
  }

  BackupWorkingLookup backup_lookup() const {
    return [this](LightpathId backup_id) -> const Path* {
      auto it = actives_.find(backup_id);
      if (it == actives_.end() || it->second.role != LightpathRole::backup) return nullptr;
      auto w = actives_.find(it->second.partner);
      return w == actives_.end() ? nullptr : &w->second.path;
    };
  }

 private:
  struct Event {
    double time = 0.0;
    std::uint64_t seq = 0;
    EventKind kind = EventKind::arrival;
    std::uint64_t payload = 0;

    bool operator>(const Event& o) const {
      if (time != o.time) return time > o.time;
      return seq > o.seq;
    }
  };

  struct PendingArrival {
    double time = 0.0;
    LightpathRequest request;
    double holding = 0.0;
  };

  std::size_t edge_pos(EdgeId id) const {
    for (std::size_t i = 0; i < net_.edge_count(); ++i) {
      if (net_.edges()[i].id == id) return i;
    }
    throw TopologyError("unknown edge id " + std::to_string(id));
  }

  void push_event(double time, EventKind kind, std::uint64_t payload) {
    queue_.push(Event{time, event_seq_++, kind, payload});
  }

  void advance_time(double t) {
    double dt = t - now_;
    if (dt > 0) {
      for (std::size_t i = 0; i < 3; ++i) occ_integral_[i] += static_cast<double>(occ_now_[i]) * dt;
      owner_integral_s_ += static_cast<double>(owners_now_s_) * dt;
      now_ = t;
    }
  }

  void refresh_occupancy() {
    for (Band b : kAllBands) {
      auto i = static_cast<std::size_t>(band_index(b));
      occ_now_[i] = net_.band_occupied_units(b);
      occ_peak_[i] = std::max(occ_peak_[i], occ_now_[i]);
    }
    owners_now_s_ = net_.band_owner_entries(Band::S);
  }

  template <typename... Parts>
  void log_line(Parts&&... parts) {
    if (!event_log_) return;
    (*event_log_) << "t=" << std::setprecision(9) << now_;
    ((*event_log_) << ' ');
    (((*event_log_) << parts), ...);
    (*event_log_) << '\n';
  }

  Network net_;
  SimulationConfig cfg_;
  double now_ = 0.0;
  LightpathId next_id_ = 1;
  std::uint64_t event_seq_ = 0;

  std::map<LightpathId, Lightpath> actives_;
  std::map<LightpathId, ProtectionRecord> records_;
  std::vector<char> failed_;
  std::uint64_t topology_version_ = 0;

  std::priority_queue<Event, std::vector<Event>, std::greater<Event>> queue_;
  std::vector<PendingArrival> arrivals_;

  std::map<std::tuple<NodeId, NodeId, int>, std::vector<Path>> route_cache_;
  std::uint64_t cache_version_ = 0;

  std::uint64_t offered_ = 0;
  std::uint64_t accepted_ = 0;
  std::uint64_t blocked_ = 0;
  std::uint64_t blocked_no_spectrum_or_qot_ = 0;
  std::uint64_t blocked_no_protection_ = 0;
  std::uint64_t failures_affected_ = 0;
  std::uint64_t failures_restored_ = 0;
  std::uint64_t failures_lost_ = 0;

  std::array<long long, 3> occ_now_{};
  std::array<long long, 3> occ_peak_{};
  std::array<double, 3> occ_integral_{};
  long long owners_now_s_ = 0;
  double owner_integral_s_ = 0.0;

  std::ostream* event_log_ = nullptr;
};

}  // namespace mbnetsim
