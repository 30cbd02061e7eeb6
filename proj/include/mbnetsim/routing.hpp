#pragma once

#include <algorithm>
#include <optional>
#include <queue>
#include <set>
#include <vector>

#include "mbnetsim/topology.hpp"

namespace mbnetsim {

/// Loop-free route. cost_km is always the left-to-right fold of the member
/// edge lengths, so identical edge sequences compare bit-equal.
struct Path {
  std::vector<EdgeId> edges;
  std::vector<NodeId> nodes;  // edges.size() + 1 entries
  double cost_km = 0.0;

  std::size_t hops() const { return edges.size(); }
  NodeId source() const { return nodes.front(); }
  NodeId destination() const { return nodes.back(); }
  bool uses_edge(EdgeId id) const {
    return std::find(edges.begin(), edges.end(), id) != edges.end();
  }
  bool shares_edge_with(const Path& other) const {
    for (EdgeId e : edges) {
      if (other.uses_edge(e)) return true;
    }
    return false;
  }
};

/// Path ordering used everywhere: cost, then hop count, then lexicographic
/// edge-id sequence. Total over distinct simple paths.
inline bool path_less(const Path& a, const Path& b) {
  if (a.cost_km != b.cost_km) return a.cost_km < b.cost_km;
  if (a.hops() != b.hops()) return a.hops() < b.hops();
  return a.edges < b.edges;
}

/// Builds a Path from an edge sequence starting at s, recomputing nodes and
/// cost canonically. Throws if the sequence is not a connected walk.
inline Path make_path(const Network& net, NodeId s, const std::vector<EdgeId>& edges) {
  Path p;
  p.edges = edges;
  p.nodes.push_back(s);
  NodeId at = s;
  for (EdgeId id : edges) {
    const Edge& e = net.edge(id);
    if (!e.touches(at)) throw TopologyError("edge " + std::to_string(id) + " does not continue the path");
    at = e.other(at);
    p.nodes.push_back(at);
    p.cost_km += e.length_km;
  }
  return p;
}

namespace detail {

struct DijkstraLabel {
  double dist = 0.0;
  std::uint32_t hops = 0;
  std::vector<EdgeId> edges;
  NodeId node = 0;

  bool operator>(const DijkstraLabel& o) const {
    if (dist != o.dist) return dist > o.dist;
    if (hops != o.hops) return hops > o.hops;
    return edges > o.edges;
  }
};

}  // namespace detail

/// Minimum-length loop-free path under the documented tie-break, or nullopt
/// when s and d are disconnected in the view.
inline std::optional<Path> shortest_path(const NetworkView& view, NodeId s, NodeId d) {
  const Network& net = view.network();
  if (!net.has_node(s) || !net.has_node(d)) {
    throw TopologyError("unknown node id " + std::to_string(net.has_node(s) ? d : s));
  }
  if (s == d) throw std::invalid_argument("shortest_path requires s != d");
  if (!view.node_usable(s) || !view.node_usable(d)) return std::nullopt;

  std::priority_queue<detail::DijkstraLabel, std::vector<detail::DijkstraLabel>,
                      std::greater<detail::DijkstraLabel>>
      frontier;
  std::vector<char> settled(net.node_count(), 0);
  frontier.push({0.0, 0, {}, s});

  while (!frontier.empty()) {
    detail::DijkstraLabel top = frontier.top();
    frontier.pop();
    if (settled[top.node]) continue;
    settled[top.node] = 1;
    if (top.node == d) return make_path(net, s, top.edges);

    for (EdgeId eid : net.incident(top.node)) {
      if (!view.edge_usable(eid)) continue;
      const Edge& e = net.edge(eid);
      NodeId next = e.other(top.node);
      if (settled[next] || !view.node_usable(next)) continue;
      detail::DijkstraLabel cand;
      cand.dist = top.dist + e.length_km;
      cand.hops = top.hops + 1;
      cand.edges = top.edges;
      cand.edges.push_back(eid);
      cand.node = next;
      frontier.push(std::move(cand));
    }
  }
  return std::nullopt;
}

inline std::optional<Path> shortest_path(const Network& net, NodeId s, NodeId d) {
  return shortest_path(NetworkView(net), s, d);
}

/// Yen's algorithm on top of shortest_path: up to k loop-free paths in the
/// documented order; fewer when the graph has fewer simple paths.
inline std::vector<Path> k_shortest_paths(const NetworkView& view, NodeId s, NodeId d, int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  std::vector<Path> found;
  auto first = shortest_path(view, s, d);
  if (!first) return found;
  found.push_back(std::move(*first));

  auto cmp = [](const Path& a, const Path& b) { return path_less(a, b); };
  std::set<Path, decltype(cmp)> candidates(cmp);
  std::set<std::vector<EdgeId>> known;  // edge sequences already in `found`
  known.insert(found.front().edges);

  const Network& net = view.network();
  while (static_cast<int>(found.size()) < k) {
    const Path& prev = found.back();
    // Spur from every node of the previous result except its destination.
    for (std::size_t i = 0; i + 1 < prev.nodes.size(); ++i) {
      NodeId spur = prev.nodes[i];
      std::vector<EdgeId> root(prev.edges.begin(), prev.edges.begin() + static_cast<long>(i));

      NetworkView spur_view = view;
      // Edges that would recreate an already-found path sharing this root.
      for (const Path& p : found) {
        if (p.edges.size() > i &&
            std::equal(root.begin(), root.end(), p.edges.begin())) {
          spur_view.exclude_edge(p.edges[i]);
        }
      }
      // Root nodes other than the spur node, to keep spur paths loop-free.
      for (std::size_t j = 0; j < i; ++j) spur_view.exclude_node(prev.nodes[j]);

      auto spur_path = shortest_path(spur_view, spur, d);
      if (!spur_path) continue;

      std::vector<EdgeId> total = root;
      total.insert(total.end(), spur_path->edges.begin(), spur_path->edges.end());
      Path candidate = make_path(net, s, total);
      if (!known.count(candidate.edges)) candidates.insert(std::move(candidate));
    }
    if (candidates.empty()) break;
    auto best = candidates.begin();
    known.insert(best->edges);
    found.push_back(*best);
    candidates.erase(best);
  }
  return found;
}

inline std::vector<Path> k_shortest_paths(const Network& net, NodeId s, NodeId d, int k) {
  return k_shortest_paths(NetworkView(net), s, d, k);
}

/// Backup candidates: the k shortest paths between working's endpoints after
/// removing every working edge, hence edge-disjoint from it by construction.
inline std::vector<Path> link_disjoint_paths(const NetworkView& view, const Path& working, int k) {
  return k_shortest_paths(view.without_edges(working.edges), working.source(),
                          working.destination(), k);
}

inline std::vector<Path> link_disjoint_paths(const Network& net, const Path& working, int k) {
  return link_disjoint_paths(NetworkView(net), working, k);
}

}  // namespace mbnetsim
