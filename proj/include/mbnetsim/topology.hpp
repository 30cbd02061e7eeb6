#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mbnetsim/core.hpp"

namespace mbnetsim {

/// Per-slot occupancy of one band on one edge. Each slot carries the list of
/// owning lightpath ids; working slots hold at most one owner, S-band slots
/// may hold several sharing backups.
class OccupancyMap {
 public:
  explicit OccupancyMap(int capacity) : owners_(static_cast<std::size_t>(capacity)) {}

  int capacity() const { return static_cast<int>(owners_.size()); }
  bool is_free(int slot) const { return owners_[static_cast<std::size_t>(slot)].empty(); }
  const std::vector<LightpathId>& owners(int slot) const {
    return owners_[static_cast<std::size_t>(slot)];
  }

  int occupied_slots() const { return occupied_; }
  int free_slots() const { return capacity() - occupied_; }
  // Total owner entries; exceeds occupied_slots() exactly when slots are shared.
  long long owner_entries() const { return owner_entries_; }

  void add_owner(int slot, LightpathId id) {
    auto& v = owners_[static_cast<std::size_t>(slot)];
    if (v.empty()) ++occupied_;
    v.push_back(id);
    ++owner_entries_;
  }

  void remove_owner(int slot, LightpathId id) {
    auto& v = owners_[static_cast<std::size_t>(slot)];
    auto it = std::find(v.begin(), v.end(), id);
    if (it == v.end()) {
      throw SpectrumConflict("owner " + std::to_string(id) + " not present in slot " +
                             std::to_string(slot));
    }
    v.erase(it);
    --owner_entries_;
    if (v.empty()) --occupied_;
  }

 private:
  std::vector<std::vector<LightpathId>> owners_;
  int occupied_ = 0;
  long long owner_entries_ = 0;
};

/// Undirected single-fibre edge. Both directions of a lightpath occupy the
/// same slots.
struct Edge {
  EdgeId id = 0;
  NodeId u = 0;
  NodeId v = 0;
  double length_km = 0.0;
  double availability = 1.0;
  std::array<OccupancyMap, 3> spectrum{OccupancyMap(band_capacity(Band::C)),
                                       OccupancyMap(band_capacity(Band::L)),
                                       OccupancyMap(band_capacity(Band::S))};

  NodeId other(NodeId n) const { return n == u ? v : u; }
  bool touches(NodeId n) const { return n == u || n == v; }
};

/// Network graph plus all mutable spectrum state. A Network is a plain value:
/// copying it snapshots the complete occupancy, which the engine and the tests
/// rely on for rollback and restorability checks.
class Network {
 public:
  // One allocation = one lightpath's identical slot range on every path edge.
  struct Allocation {
    std::vector<EdgeId> edges;
    Band band = Band::C;
    SlotRange range;
    bool shared = false;
  };

  NodeId add_node(std::string name = std::string()) {
    auto id = static_cast<NodeId>(node_names_.size());
    if (name.empty()) name = "n" + std::to_string(id);
    node_names_.push_back(std::move(name));
    adjacency_.emplace_back();
    return id;
  }

  void add_edge(EdgeId id, NodeId u, NodeId v, double length_km, double availability) {
    if (u >= node_count() || v >= node_count()) {
      throw TopologyError("unknown node " + std::to_string(u >= node_count() ? u : v) +
                          " in edge " + std::to_string(id));
    }
    if (u == v) throw TopologyError("self-loop on node " + std::to_string(u) + " (edge " + std::to_string(id) + ")");
    if (edge_index_.count(id)) throw TopologyError("duplicate edge id " + std::to_string(id));
    if (!(length_km > 0.0)) {
      throw TopologyError("non-positive length " + std::to_string(length_km) + " on edge " +
                          std::to_string(id));
    }
    if (!(availability > 0.0) || availability > 1.0) {
      throw TopologyError("availability " + std::to_string(availability) + " outside (0,1] on edge " +
                          std::to_string(id));
    }
    edge_index_.emplace(id, edges_.size());
    Edge e;
    e.id = id;
    e.u = u;
    e.v = v;
    e.length_km = length_km;
    e.availability = availability;
    edges_.push_back(std::move(e));
    for (NodeId n : {u, v}) {
      auto& adj = adjacency_[n];
      adj.insert(std::upper_bound(adj.begin(), adj.end(), id), id);
    }
  }

  std::size_t node_count() const { return node_names_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::string& node_name(NodeId n) const { return node_names_.at(n); }
  bool has_node(NodeId n) const { return n < node_count(); }
  bool has_edge(EdgeId id) const { return edge_index_.count(id) != 0; }

  const Edge& edge(EdgeId id) const { return edges_[index_of(id)]; }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Incident edge ids of a node, ascending.
  const std::vector<EdgeId>& incident(NodeId n) const { return adjacency_.at(n); }

  const OccupancyMap& occupancy(EdgeId id, Band b) const {
    return edges_[index_of(id)].spectrum[static_cast<std::size_t>(band_index(b))];
  }

  // Mutable access for the spectrum operations; occupancy is never edited
  // directly elsewhere so the allocation registry stays in sync.
  OccupancyMap& occupancy_mut(EdgeId id, Band b) {
    return edges_[index_of(id)].spectrum[static_cast<std::size_t>(band_index(b))];
  }

  const std::map<LightpathId, Allocation>& allocations() const { return allocations_; }
  std::map<LightpathId, Allocation>& allocations_mut() { return allocations_; }

  /// Occupied slot-edge units in one band, over the whole network.
  long long band_occupied_units(Band b) const {
    long long total = 0;
    for (const auto& e : edges_) total += e.spectrum[static_cast<std::size_t>(band_index(b))].occupied_slots();
    return total;
  }

  long long band_owner_entries(Band b) const {
    long long total = 0;
    for (const auto& e : edges_) total += e.spectrum[static_cast<std::size_t>(band_index(b))].owner_entries();
    return total;
  }

  long long band_total_units(Band b) const {
    return static_cast<long long>(edge_count()) * band_capacity(b);
  }

 private:
  std::size_t index_of(EdgeId id) const {
    auto it = edge_index_.find(id);
    if (it == edge_index_.end()) throw TopologyError("unknown edge id " + std::to_string(id));
    return it->second;
  }

  std::vector<std::string> node_names_;
  std::vector<Edge> edges_;
  std::unordered_map<EdgeId, std::size_t> edge_index_;
  std::vector<std::vector<EdgeId>> adjacency_;
  std::map<LightpathId, Allocation> allocations_;
};

/// Read-only subgraph: the underlying Network with some edges (and, for the
/// k-shortest-path machinery, some nodes) masked out. Cheap to copy; valid
/// only while the Network outlives it.
class NetworkView {
 public:
  explicit NetworkView(const Network& net)
      : net_(&net),
        edge_excluded_(net.edge_count(), 0),
        node_excluded_(net.node_count(), 0) {
    // excluded flags are indexed by position in net.edges(), not by edge id
    for (std::size_t i = 0; i < net.edge_count(); ++i) edge_pos_.emplace(net.edges()[i].id, i);
  }

  const Network& network() const { return *net_; }

  bool edge_usable(EdgeId id) const {
    auto it = edge_pos_.find(id);
    return it != edge_pos_.end() && !edge_excluded_[it->second];
  }
  bool node_usable(NodeId n) const { return n < node_excluded_.size() && !node_excluded_[n]; }

  void exclude_edge(EdgeId id) {
    auto it = edge_pos_.find(id);
    if (it == edge_pos_.end()) throw TopologyError("unknown edge id " + std::to_string(id));
    edge_excluded_[it->second] = 1;
  }
  void exclude_node(NodeId n) { node_excluded_.at(n) = 1; }

  NetworkView without_edges(const std::vector<EdgeId>& ids) const {
    NetworkView v = *this;
    for (EdgeId id : ids) v.exclude_edge(id);
    return v;
  }

 private:
  const Network* net_;
  std::vector<char> edge_excluded_;
  std::vector<char> node_excluded_;
  std::unordered_map<EdgeId, std::size_t> edge_pos_;
};

/// View of `net` without the given edges; `net` itself is untouched.
inline NetworkView remove_edges(const Network& net, const std::vector<EdgeId>& ids) {
  return NetworkView(net).without_edges(ids);
}

struct TopologyOptions {
  // Availability fallback when the document omits it: A = 1 - alpha * length_km,
  // clamped to [1e-12, 1].
  double default_alpha_per_km = 1e-5;
};

inline double default_availability(double length_km, const TopologyOptions& opts) {
  double a = 1.0 - opts.default_alpha_per_km * length_km;
  return std::clamp(a, 1e-12, 1.0);
}

inline Network load_topology(const nlohmann::json& doc, const TopologyOptions& opts = {}) {
  if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("edges")) {
    throw TopologyError("topology document must be an object with 'nodes' and 'edges'");
  }
  const auto& nodes = doc.at("nodes");
  const auto& edges = doc.at("edges");
  if (!nodes.is_array() || !edges.is_array()) throw TopologyError("'nodes' and 'edges' must be arrays");

  auto read_index = [](const nlohmann::json& v, const char* what) -> std::uint64_t {
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
      throw TopologyError(std::string(what) + " must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
  };

  // Node ids must be exactly 0..N-1 (any order in the document).
  std::vector<std::string> names(nodes.size());
  std::vector<char> seen(nodes.size(), 0);
  for (const auto& n : nodes) {
    if (!n.is_object() || !n.contains("id")) {
      throw TopologyError("node entry without a non-negative integer 'id'");
    }
    auto id = read_index(n.at("id"), "node id");
    if (id >= nodes.size() || seen[id]) {
      throw TopologyError("node ids must be unique and dense 0..N-1 (offending id " +
                          std::to_string(id) + ")");
    }
    seen[id] = 1;
    names[id] = n.value("name", std::string());
  }

  Network net;
  for (std::size_t i = 0; i < names.size(); ++i) net.add_node(names[i]);

  for (const auto& e : edges) {
    if (!e.is_object()) throw TopologyError("edge entry is not an object");
    for (const char* key : {"id", "u", "v"}) {
      if (!e.contains(key)) {
        throw TopologyError(std::string("edge entry needs non-negative integer '") + key + "'");
      }
    }
    if (!e.contains("length_km") || !e.at("length_km").is_number()) {
      throw TopologyError("edge entry needs numeric 'length_km'");
    }
    auto id = read_index(e.at("id"), "edge id");
    auto u = read_index(e.at("u"), "edge endpoint");
    auto v = read_index(e.at("v"), "edge endpoint");
    if (u >= net.node_count() || v >= net.node_count()) {
      throw TopologyError("unknown node " + std::to_string(u >= net.node_count() ? u : v) +
                          " in edge " + std::to_string(id));
    }
    double len = e.at("length_km").get<double>();
    double avail = e.contains("availability") ? e.at("availability").get<double>()
                                              : default_availability(len, opts);
    net.add_edge(static_cast<EdgeId>(id), static_cast<NodeId>(u), static_cast<NodeId>(v), len, avail);
  }
  return net;
}

inline Network load_topology_file(const std::string& path, const TopologyOptions& opts = {}) {
  std::ifstream in(path);
  if (!in) throw TopologyError("cannot open topology file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw TopologyError("malformed topology document " + path + ": " + e.what());
  }
  return load_topology(doc, opts);
}

inline nlohmann::json topology_to_json(const Network& net) {
  nlohmann::json doc;
  doc["nodes"] = nlohmann::json::array();
  for (NodeId n = 0; n < net.node_count(); ++n) {
    doc["nodes"].push_back({{"id", n}, {"name", net.node_name(n)}});
  }
  doc["edges"] = nlohmann::json::array();
  for (const auto& e : net.edges()) {
    doc["edges"].push_back({{"id", e.id},
                            {"u", e.u},
                            {"v", e.v},
                            {"length_km", e.length_km},
                            {"availability", e.availability}});
  }
  return doc;
}

}  // namespace mbnetsim
