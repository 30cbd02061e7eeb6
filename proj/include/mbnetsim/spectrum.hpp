#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mbnetsim/routing.hpp"

namespace mbnetsim {

/// Everything the paper fixes is a constant here; only the guard band is open.
struct SpectrumPolicy {
  static constexpr double grid_ghz = kGridGhz;
  static constexpr std::array<Band, 2> band_order_working = kWorkingBands;
  static constexpr Band band_backup = kBackupBand;

  int guard_band_slots = 1;
};

/// Slots actually reserved per request: demand plus one single-sided guard
/// band, so adjacent allocations end up separated by exactly GB slots.
inline int alloc_width(int request_slots, const SpectrumPolicy& policy) {
  if (request_slots < 1) throw std::invalid_argument("request_slots must be >= 1");
  return request_slots + policy.guard_band_slots;
}

enum class LightpathRole { working, backup };

struct Lightpath {
  LightpathId id = 0;
  Path path;
  Band band = Band::C;
  SlotRange range;
  LightpathRole role = LightpathRole::working;
  // For a backup, the working lightpath it protects; 0 otherwise.
  LightpathId partner = 0;
};

/// Lowest start such that `usable(edge, slot)` holds for the whole window on
/// every edge of the path (continuity + contiguity). Generic so the shared
/// backup search can widen the predicate to "free or share-compatible".
template <typename SlotPred>
std::optional<SlotRange> first_fit_if(const Path& path, Band band, int width, SlotPred&& usable) {
  const int cap = band_capacity(band);
  if (width < 1 || width > cap) return std::nullopt;
  int start = 0;
  while (start + width <= cap) {
    int blocked_at = -1;
    for (EdgeId e : path.edges) {
      for (int slot = start; slot < start + width; ++slot) {
        if (!usable(e, slot)) {
          blocked_at = slot;
          break;
        }
      }
      if (blocked_at >= 0) break;
    }
    if (blocked_at < 0) return SlotRange{start, width};
    start = blocked_at + 1;
  }
  return std::nullopt;
}

/// First-fit over strictly free slots.
inline std::optional<SlotRange> first_fit(const Network& net, const Path& path, Band band,
                                          int width) {
  return first_fit_if(path, band, width,
                      [&](EdgeId e, int slot) { return net.occupancy(e, band).is_free(slot); });
}

/// Records `owner` on every (edge, slot) of the range, all-or-nothing.
/// shared=true permits co-ownership and is only legal in the S band; the
/// share-compatibility of co-owners is the caller's contract.
inline void allocate(Network& net, const Path& path, Band band, SlotRange range, LightpathId owner,
                     bool shared) {
  if (shared && band != kBackupBand) {
    throw std::invalid_argument("shared allocation is restricted to the S band");
  }
  if (range.start < 0 || range.width < 1 || range.end() > band_capacity(band)) {
    throw SpectrumConflict("slot range [" + std::to_string(range.start) + "," +
                           std::to_string(range.end()) + ") outside band " + band_name(band));
  }
  if (net.allocations().count(owner)) {
    throw SpectrumConflict("lightpath " + std::to_string(owner) + " already holds an allocation");
  }
  // Validate every slot before touching anything.
  for (EdgeId e : path.edges) {
    const auto& occ = net.occupancy(e, band);
    for (int slot = range.start; slot < range.end(); ++slot) {
      if (!shared && !occ.is_free(slot)) {
        throw SpectrumConflict("slot " + std::to_string(slot) + " on edge " + std::to_string(e) +
                               " band " + band_name(band) + " already occupied");
      }
    }
  }
  for (EdgeId e : path.edges) {
    auto& occ = net.occupancy_mut(e, band);
    for (int slot = range.start; slot < range.end(); ++slot) occ.add_owner(slot, owner);
  }
  net.allocations_mut().emplace(owner,
                                Network::Allocation{path.edges, band, range, shared});
}

/// Removes `owner` from every slot it holds; shared slots with surviving
/// owners stay occupied.
inline void release(Network& net, LightpathId owner) {
  auto it = net.allocations_mut().find(owner);
  if (it == net.allocations_mut().end()) {
    throw SpectrumConflict("release of unknown lightpath " + std::to_string(owner));
  }
  const auto alloc = it->second;
  for (EdgeId e : alloc.edges) {
    auto& occ = net.occupancy_mut(e, alloc.band);
    for (int slot = alloc.range.start; slot < alloc.range.end(); ++slot) occ.remove_owner(slot, owner);
  }
  net.allocations_mut().erase(it);
}

/// Test-facing dump: one line per (edge, band) with run-length-encoded
/// free/occupied segments, e.g. `edge 0 C: F0-4 O5-9 F10-319`.
inline std::string dump_occupancy(const Network& net) {
  std::ostringstream out;
  for (const auto& e : net.edges()) {
    for (Band b : kAllBands) {
      const auto& occ = net.occupancy(e.id, b);
      out << "edge " << e.id << ' ' << band_name(b) << ':';
      int cap = occ.capacity();
      int seg_start = 0;
      bool seg_free = occ.is_free(0);
      for (int slot = 1; slot <= cap; ++slot) {
        bool free = slot < cap ? occ.is_free(slot) : !seg_free;
        if (free != seg_free) {
          out << ' ' << (seg_free ? 'F' : 'O') << seg_start << '-' << (slot - 1);
          seg_start = slot;
          seg_free = free;
        }
      }
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace mbnetsim
