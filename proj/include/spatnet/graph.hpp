#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace spatnet {

using NodeId = std::uint32_t;

struct Position {
  double x = 0.0;
  double y = 0.0;
};

/// Weighted graph whose nodes may carry 2D coordinates.
///
/// Node ids are dense integers assigned in insertion order.  Undirected
/// graphs store both directions of every edge; weights are strictly
/// positive.  Either every node has a position or none does (abstract
/// topologies).  Construction is single-writer; afterwards the graph is
/// read-only and safe to share across threads.
class SpatialGraph {
 public:
  struct Edge {
    NodeId to;
    double weight;
  };

  explicit SpatialGraph(bool directed = false, bool allow_self_loops = false)
      : directed_(directed), allow_self_loops_(allow_self_loops) {}

  NodeId add_node() {
    if (!positions_.empty()) {
      throw std::invalid_argument("graph has positioned nodes; position required");
    }
    adjacency_.emplace_back();
    return static_cast<NodeId>(adjacency_.size() - 1);
  }

  NodeId add_node(Position p) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw std::invalid_argument("node position must be finite");
    }
    if (positions_.size() != adjacency_.size()) {
      throw std::invalid_argument("graph has positionless nodes; cannot mix");
    }
    adjacency_.emplace_back();
    positions_.push_back(p);
    return static_cast<NodeId>(adjacency_.size() - 1);
  }

  /// Inserts or replaces the edge u-v. Undirected graphs gain both
  /// directions; inserting an existing edge replaces its weight.
  void add_edge(NodeId u, NodeId v, double weight) {
    check_node(u);
    check_node(v);
    if (u == v && !allow_self_loops_) {
      throw std::invalid_argument("self-loop on node " + std::to_string(u) +
                                  " (self-loops not enabled)");
    }
    if (!(weight > 0.0) || !std::isfinite(weight)) {
      throw std::invalid_argument("edge weight must be strictly positive");
    }
    const bool replaced = set_or_insert(u, v, weight);
    if (!directed_ && u != v) set_or_insert(v, u, weight);
    if (!replaced) ++edge_count_;
  }

  /// Removes the edge u-v (both directions if undirected). Throws if the
  /// edge is absent.
  void remove_edge(NodeId u, NodeId v) {
    check_node(u);
    check_node(v);
    if (!erase_half(u, v)) {
      throw std::invalid_argument("no edge " + std::to_string(u) + "-" +
                                  std::to_string(v));
    }
    if (!directed_ && u != v) erase_half(v, u);
    --edge_count_;
  }

  std::size_t node_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  bool directed() const { return directed_; }
  bool allows_self_loops() const { return allow_self_loops_; }
  bool has_positions() const { return !positions_.empty(); }

  const std::vector<Edge>& neighbors(NodeId u) const {
    check_node(u);
    return adjacency_[u];
  }

  /// Number of incident edges (out-edges if directed).
  std::size_t degree(NodeId u) const { return neighbors(u).size(); }

  /// Sum of incident edge weights.
  double strength(NodeId u) const {
    double total = 0.0;
    for (const Edge& e : neighbors(u)) total += e.weight;
    return total;
  }

  double total_strength() const {
    double total = 0.0;
    for (NodeId u = 0; u < adjacency_.size(); ++u) total += strength(u);
    return total;
  }

  const Edge* find_edge(NodeId u, NodeId v) const {
    for (const Edge& e : neighbors(u)) {
      if (e.to == v) return &e;
    }
    return nullptr;
  }

  bool has_edge(NodeId u, NodeId v) const { return find_edge(u, v) != nullptr; }

  const Position& position(NodeId u) const {
    check_node(u);
    if (positions_.empty()) throw std::logic_error("graph carries no positions");
    return positions_[u];
  }

  void reserve_nodes(std::size_t n) {
    adjacency_.reserve(n);
    if (!positions_.empty() || adjacency_.empty()) positions_.reserve(n);
  }

 private:
  void check_node(NodeId u) const {
    if (u >= adjacency_.size()) {
      throw std::out_of_range("unknown node " + std::to_string(u));
    }
  }

  bool erase_half(NodeId u, NodeId v) {
    auto& edges = adjacency_[u];
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (edges[i].to == v) {
        edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(i));
        return true;
      }
    }
    return false;
  }

  bool set_or_insert(NodeId u, NodeId v, double weight) {
    for (Edge& e : adjacency_[u]) {
      if (e.to == v) {
        e.weight = weight;
        return true;
      }
    }
    adjacency_[u].push_back(Edge{v, weight});
    return false;
  }

  bool directed_;
  bool allow_self_loops_;
  std::size_t edge_count_ = 0;
  std::vector<std::vector<Edge>> adjacency_;
  std::vector<Position> positions_;
};

/// Hop distances from src by breadth-first search; nullopt marks nodes
/// unreachable from src.
inline std::vector<std::optional<std::uint32_t>> shortest_path_lengths(
    const SpatialGraph& g, NodeId src) {
  if (src >= g.node_count()) {
    throw std::out_of_range("unknown node " + std::to_string(src));
  }
  std::vector<std::optional<std::uint32_t>> dist(g.node_count());
  std::vector<NodeId> frontier{src};
  dist[src] = 0;
  std::uint32_t level = 0;
  while (!frontier.empty()) {
    ++level;
    std::vector<NodeId> next;
    for (NodeId u : frontier) {
      for (const SpatialGraph::Edge& e : g.neighbors(u)) {
        if (!dist[e.to]) {
          dist[e.to] = level;
          next.push_back(e.to);
        }
      }
    }
    frontier = std::move(next);
  }
  return dist;
}

/// Component label per node (labels dense, in order of first discovery).
/// Directed graphs are traversed as if undirected only when edges are
/// symmetric; intended for undirected graphs.
inline std::vector<std::uint32_t> connected_components(const SpatialGraph& g) {
  constexpr std::uint32_t kUnset = 0xFFFFFFFFu;
  std::vector<std::uint32_t> label(g.node_count(), kUnset);
  std::uint32_t next_label = 0;
  for (NodeId s = 0; s < g.node_count(); ++s) {
    if (label[s] != kUnset) continue;
    label[s] = next_label;
    std::vector<NodeId> stack{s};
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      for (const SpatialGraph::Edge& e : g.neighbors(u)) {
        if (label[e.to] == kUnset) {
          label[e.to] = next_label;
          stack.push_back(e.to);
        }
      }
    }
    ++next_label;
  }
  return label;
}

inline bool is_connected(const SpatialGraph& g) {
  if (g.node_count() == 0) return true;
  const auto dist = shortest_path_lengths(g, 0);
  for (const auto& d : dist) {
    if (!d) return false;
  }
  return true;
}

}  // namespace spatnet
