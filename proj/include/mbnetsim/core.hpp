#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>

namespace mbnetsim {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;
using LightpathId = std::uint64_t;

// 12.5 GHz flexible-grid slot raster, fixed.
inline constexpr double kGridGhz = 12.5;

// BPSK, 1 bit per symbol: the only modulation level in use.
inline constexpr int kBpskLevel = 1;

enum class Band : int { C = 0, L = 1, S = 2 };

inline constexpr std::array<Band, 3> kAllBands{Band::C, Band::L, Band::S};
// C and L carry working traffic, tried in this order; S is reserved for backups.
inline constexpr std::array<Band, 2> kWorkingBands{Band::C, Band::L};
inline constexpr Band kBackupBand = Band::S;

constexpr int band_index(Band b) { return static_cast<int>(b); }

// Slot capacities per band: 868 working slots (C+L), 732 backup slots (S).
constexpr int band_capacity(Band b) {
  switch (b) {
    case Band::C: return 320;
    case Band::L: return 548;
    case Band::S: return 732;
  }
  return 0;
}

constexpr const char* band_name(Band b) {
  switch (b) {
    case Band::C: return "C";
    case Band::L: return "L";
    case Band::S: return "S";
  }
  return "?";
}

// Contiguous slot block [start, start+width) inside one band.
struct SlotRange {
  int start = 0;
  int width = 0;

  int end() const { return start + width; }
  friend bool operator==(const SlotRange&, const SlotRange&) = default;
};

struct TopologyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SpectrumConflict : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mbnetsim
