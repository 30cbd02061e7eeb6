#pragma once

#include <cmath>
#include <map>

#include "mbnetsim/routing.hpp"

namespace mbnetsim {

/// Reciprocal-sum span model: each 80 km span contributes a fixed per-band
/// GOSNR; spans accumulate as parallel noise sources. Defaults keep C best
/// and S worst.
struct QotParams {
  double span_length_km = 80.0;
  std::array<double, 3> per_band_span_gosnr_db{21.0, 20.0, 18.0};  // C, L, S
  std::map<int, double> threshold_db{{kBpskLevel, 9.0}};

  double span_gosnr_db(Band b) const { return per_band_span_gosnr_db[static_cast<std::size_t>(band_index(b))]; }

  void validate() const {
    if (!(span_length_km > 0.0)) throw std::invalid_argument("span_length_km must be positive");
    if (span_gosnr_db(Band::S) > span_gosnr_db(Band::C)) {
      throw std::invalid_argument("per-span GOSNR must not rank S above C");
    }
  }
};

struct GosnrReport {
  double gosnr_db = 0.0;
  int span_count = 0;
  bool acceptable = false;
};

/// Amplifier spans on the path: per-edge ceil(length / span_length), at least
/// one per edge.
inline int span_count(const Network& net, const Path& path, const QotParams& params) {
  if (path.edges.empty()) throw std::invalid_argument("span_count requires a nonempty path");
  int total = 0;
  for (EdgeId id : path.edges) {
    int spans = static_cast<int>(std::ceil(net.edge(id).length_km / params.span_length_km));
    total += std::max(1, spans);
  }
  return total;
}

inline bool gosnr_acceptable(const GosnrReport& report, int m, const QotParams& params) {
  auto it = params.threshold_db.find(m);
  if (it == params.threshold_db.end()) {
    throw std::invalid_argument("no GOSNR threshold for modulation level " + std::to_string(m));
  }
  return report.gosnr_db >= it->second;
}

/// GOSNR of the whole path in `band`: per-span linear SNR summed reciprocally
/// over every span of every edge, then back to dB.
inline GosnrReport path_gosnr(const Network& net, const Path& path, Band band,
                              const QotParams& params, int m = kBpskLevel) {
  if (path.edges.empty()) throw std::invalid_argument("path_gosnr requires a nonempty path");
  const double span_linear = std::pow(10.0, params.span_gosnr_db(band) / 10.0);
  double inverse_sum = 0.0;
  int spans_total = 0;
  for (EdgeId id : path.edges) {
    int spans = std::max(
        1, static_cast<int>(std::ceil(net.edge(id).length_km / params.span_length_km)));
    spans_total += spans;
    inverse_sum += spans / span_linear;
  }
  GosnrReport report;
  report.span_count = spans_total;
  report.gosnr_db = 10.0 * std::log10(1.0 / inverse_sum);
  report.acceptable = gosnr_acceptable(report, m, params);
  return report;
}

}  // namespace mbnetsim
