#pragma once

#include <functional>
#include <map>
#include <optional>

#include "mbnetsim/qot.hpp"
#include "mbnetsim/spectrum.hpp"

namespace mbnetsim {

struct AvailabilityConfig {
  double a_th = 0.999;

  void validate() const {
    if (!(a_th > 0.0) || a_th > 1.0) throw std::invalid_argument("a_th must lie in (0,1]");
  }
};

enum class ProtectionMode { none, shared, dedicated };

inline const char* protection_mode_name(ProtectionMode m) {
  switch (m) {
    case ProtectionMode::none: return "none";
    case ProtectionMode::shared: return "s-band-shared";
    case ProtectionMode::dedicated: return "s-band-dedicated";
  }
  return "?";
}

enum class ActivePath { working, backup };

struct ProtectionRecord {
  LightpathId working_id = 0;
  std::optional<LightpathId> backup_id;
  double a_w = 1.0;
  ActivePath active = ActivePath::working;
};

/// Independent-link availability of the whole path.
inline double path_availability(const Network& net, const Path& path) {
  if (path.edges.empty()) throw std::invalid_argument("path_availability requires a nonempty path");
  double a = 1.0;
  for (EdgeId id : path.edges) a *= net.edge(id).availability;
  return a;
}

/// A backup is provisioned only when the working availability falls strictly
/// below the threshold.
inline bool needs_backup(double a_w, const AvailabilityConfig& cfg) { return a_w < cfg.a_th; }

/// Resolves a backup lightpath id to the working path it protects. Returns
/// nullptr for ids that are not known backups.
using BackupWorkingLookup = std::function<const Path*(LightpathId)>;

/// True iff every backup already owning (edge, slot) protects a working path
/// edge-disjoint from candidate_working, so one more backup for
/// candidate_working may join the slot under the single-failure assumption.
inline bool share_compatible(const Network& net, EdgeId edge, int slot,
                             const Path& candidate_working, const BackupWorkingLookup& working_of) {
  for (LightpathId owner : net.occupancy(edge, kBackupBand).owners(slot)) {
    const Path* w = working_of(owner);
    if (w == nullptr) return false;  // non-backup owner can never share
    if (w->shares_edge_with(candidate_working)) return false;
  }
  return true;
}

/// Invariant scan: all co-owners of every occupied S-band slot protect
/// pairwise edge-disjoint working paths.
inline bool backup_sharing_consistent(const Network& net, const BackupWorkingLookup& working_of) {
  for (const auto& e : net.edges()) {
    const auto& occ = net.occupancy(e.id, kBackupBand);
    for (int slot = 0; slot < occ.capacity(); ++slot) {
      const auto& owners = occ.owners(slot);
      for (std::size_t i = 0; i < owners.size(); ++i) {
        for (std::size_t j = i + 1; j < owners.size(); ++j) {
          const Path* a = working_of(owners[i]);
          const Path* b = working_of(owners[j]);
          if (a == nullptr || b == nullptr || a->shares_edge_with(*b)) return false;
        }
      }
    }
  }
  return true;
}

struct BackupQuery {
  int width = 1;             // slots incl. guard band, same as the working allocation
  int k = 1;                 // candidate path count
  ProtectionMode mode = ProtectionMode::shared;
  int m = kBpskLevel;        // modulation level for the QoT gate
};

/// S-band backup provisioning: walks link-disjoint candidates in path order,
/// takes the lowest S-band window whose slots are free or (in shared mode)
/// share-compatible, gated by S-band GOSNR. Allocates on success.
inline std::optional<Lightpath> provision_backup(Network& net, const NetworkView& routing_view,
                                                 const Lightpath& working, LightpathId backup_id,
                                                 const BackupQuery& query, const QotParams& qot,
                                                 const BackupWorkingLookup& working_of) {
  for (const Path& candidate : link_disjoint_paths(routing_view, working.path, query.k)) {
    std::optional<SlotRange> range;
    if (query.mode == ProtectionMode::shared) {
      range = first_fit_if(candidate, kBackupBand, query.width, [&](EdgeId e, int slot) {
        return net.occupancy(e, kBackupBand).is_free(slot) ||
               share_compatible(net, e, slot, working.path, working_of);
      });
    } else {
      range = first_fit(net, candidate, kBackupBand, query.width);
    }
    if (!range) continue;
    if (!path_gosnr(net, candidate, kBackupBand, qot, query.m).acceptable) continue;

    allocate(net, candidate, kBackupBand, *range, backup_id,
             query.mode == ProtectionMode::shared);
    Lightpath backup;
    backup.id = backup_id;
    backup.path = candidate;
    backup.band = kBackupBand;
    backup.range = *range;
    backup.role = LightpathRole::backup;
    backup.partner = working.id;
    return backup;
  }
  return std::nullopt;
}

struct FailureReport {
  EdgeId edge = 0;
  std::vector<LightpathId> restored;  // working ids switched to their backup
  std::vector<LightpathId> lost;      // working ids with no usable backup
  std::size_t affected() const { return restored.size() + lost.size(); }
};

/// End-node switchover after a single-edge failure: every record whose active
/// working path crosses the failed edge either flips to its backup or is lost.
inline FailureReport switchover(std::map<LightpathId, ProtectionRecord>& records,
                                const std::function<const Lightpath*(LightpathId)>& lightpath_of,
                                EdgeId failed_edge) {
  FailureReport report;
  report.edge = failed_edge;
  for (auto& [wid, record] : records) {
    if (record.active != ActivePath::working) continue;
    const Lightpath* w = lightpath_of(wid);
    if (w == nullptr || !w->path.uses_edge(failed_edge)) continue;
    const Lightpath* b = record.backup_id ? lightpath_of(*record.backup_id) : nullptr;
    if (b != nullptr && !b->path.uses_edge(failed_edge)) {
      record.active = ActivePath::backup;
      report.restored.push_back(wid);
    } else {
      report.lost.push_back(wid);
    }
  }
  return report;
}

}  // namespace mbnetsim
