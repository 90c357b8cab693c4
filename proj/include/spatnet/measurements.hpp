#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "spatnet/detail/text.hpp"
#include "spatnet/graph.hpp"

namespace spatnet {

/// Unweighted local clustering: existing links among neighbors over
/// k(k-1)/2. Nodes with fewer than two neighbors score zero.
inline double clustering_coefficient(const SpatialGraph& g, NodeId v) {
  if (g.directed()) {
    throw std::invalid_argument("clustering coefficient requires an undirected graph");
  }
  const auto& nbrs = g.neighbors(v);
  std::vector<NodeId> ids;
  ids.reserve(nbrs.size());
  for (const auto& e : nbrs) {
    if (e.to != v) ids.push_back(e.to);
  }
  const std::size_t k = ids.size();
  if (k < 2) return 0.0;
  std::size_t links = 0;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      if (g.has_edge(ids[a], ids[b])) ++links;
    }
  }
  return 2.0 * static_cast<double>(links) /
         (static_cast<double>(k) * static_cast<double>(k - 1));
}

/// Number of nodes at exactly `depth` hops from v (hierarchical degree).
/// depth 1 recovers the ordinary degree.
inline std::uint64_t hierarchical_degree(const SpatialGraph& g, NodeId v,
                                         std::uint32_t depth) {
  if (depth < 1) {
    throw std::invalid_argument("hierarchical degree depth must be >= 1");
  }
  const auto dist = shortest_path_lengths(g, v);
  std::uint64_t count = 0;
  for (const auto& d : dist) {
    if (d && *d == depth) ++count;
  }
  return count;
}

/// Degree -> node count, keyed in increasing degree order.
inline std::map<std::uint64_t, std::uint64_t> degree_distribution(
    const SpatialGraph& g) {
  std::map<std::uint64_t, std::uint64_t> hist;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    ++hist[g.degree(v)];
  }
  return hist;
}

/// Per-node summary used by the texture pipeline:
/// [degree, strength, clustering, hierarchical degree 2, hierarchical degree 3].
struct NodeFeatureVector {
  double degree = 0.0;
  double strength = 0.0;
  double clustering = 0.0;
  double hdeg2 = 0.0;
  double hdeg3 = 0.0;
};

inline NodeFeatureVector node_feature_vector(const SpatialGraph& g, NodeId v) {
  NodeFeatureVector f;
  f.degree = static_cast<double>(g.degree(v));
  f.strength = g.strength(v);
  f.clustering = clustering_coefficient(g, v);
  f.hdeg2 = static_cast<double>(hierarchical_degree(g, v, 2));
  f.hdeg3 = static_cast<double>(hierarchical_degree(g, v, 3));
  return f;
}

inline void write_feature_csv(std::ostream& out, const SpatialGraph& g) {
  out << "node,degree,strength,clustering,hdeg2,hdeg3\n";
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const NodeFeatureVector f = node_feature_vector(g, v);
    out << v << ',' << detail::format_double(f.degree) << ','
        << detail::format_double(f.strength) << ','
        << detail::format_double(f.clustering) << ','
        << detail::format_double(f.hdeg2) << ','
        << detail::format_double(f.hdeg3) << '\n';
  }
}

inline void write_degree_histogram_csv(std::ostream& out,
                                       const SpatialGraph& g) {
  out << "degree,count\n";
  for (const auto& [degree, count] : degree_distribution(g)) {
    out << degree << ',' << count << '\n';
  }
}

}  // namespace spatnet
