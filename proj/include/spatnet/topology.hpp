#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "spatnet/graph.hpp"
#include "spatnet/rng.hpp"

namespace spatnet {

enum class TopologyModel { random, small_world, scale_free, lattice };

inline const char* topology_model_name(TopologyModel m) {
  switch (m) {
    case TopologyModel::random: return "random";
    case TopologyModel::small_world: return "small_world";
    case TopologyModel::scale_free: return "scale_free";
    case TopologyModel::lattice: return "lattice";
  }
  throw std::invalid_argument("unknown topology model");
}

inline TopologyModel parse_topology_model(const std::string& name) {
  if (name == "random") return TopologyModel::random;
  if (name == "small_world") return TopologyModel::small_world;
  if (name == "scale_free") return TopologyModel::scale_free;
  if (name == "lattice") return TopologyModel::lattice;
  throw std::invalid_argument("unknown topology model '" + name + "'");
}

/// Processor-interconnection spec. Only the fields of the chosen model are
/// read: p for random, k/p_rew for small_world, m for scale_free,
/// rows/cols for lattice.
struct TopologySpec {
  TopologyModel model = TopologyModel::random;
  std::uint32_t n = 0;
  std::uint64_t seed = 42;
  double p = 0.1;
  std::uint32_t k = 4;
  double p_rew = 0.1;
  std::uint32_t m = 2;
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
};

namespace detail {

inline SpatialGraph random_topology(std::uint32_t n, double p, SplitMix64& rng) {
  SpatialGraph g;
  g.reserve_nodes(n);
  for (std::uint32_t v = 0; v < n; ++v) g.add_node();
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) {
      if (rng.next_double() < p) g.add_edge(i, j, 1.0);
    }
  }
  return g;
}

/// Ring lattice (k/2 neighbors per side) followed by one rewiring sweep in
/// ring construction order: with probability p_rew the far endpoint of
/// edge (i, i+j) moves to a uniform target that is neither i nor already
/// adjacent to i. Nodes adjacent to everyone keep their edge.
inline SpatialGraph small_world_topology(std::uint32_t n, std::uint32_t k,
                                         double p_rew, SplitMix64& rng) {
  SpatialGraph g;
  g.reserve_nodes(n);
  for (std::uint32_t v = 0; v < n; ++v) g.add_node();
  for (std::uint32_t j = 1; j <= k / 2; ++j) {
    for (std::uint32_t i = 0; i < n; ++i) g.add_edge(i, (i + j) % n, 1.0);
  }
  for (std::uint32_t j = 1; j <= k / 2; ++j) {
    for (std::uint32_t i = 0; i < n; ++i) {
      if (!(rng.next_double() < p_rew)) continue;
      if (g.degree(i) == n - 1) continue;
      const std::uint32_t old = (i + j) % n;
      std::uint32_t target;
      do {
        target = static_cast<std::uint32_t>(rng.next_below(n));
      } while (target == i || g.has_edge(i, target));
      g.remove_edge(i, old);
      g.add_edge(i, target, 1.0);
    }
  }
  return g;
}

/// Preferential attachment from an (m+1)-clique: every later node links to
/// m distinct members of the endpoint pool frozen before its own edges,
/// so attachment probability is proportional to degree.
inline SpatialGraph scale_free_topology(std::uint32_t n, std::uint32_t m,
                                        SplitMix64& rng) {
  SpatialGraph g;
  g.reserve_nodes(n);
  for (std::uint32_t v = 0; v < n; ++v) g.add_node();
  std::vector<std::uint32_t> pool;
  for (std::uint32_t i = 0; i <= m && i < n; ++i) {
    for (std::uint32_t j = i + 1; j <= m; ++j) {
      g.add_edge(i, j, 1.0);
      pool.push_back(i);
      pool.push_back(j);
    }
  }
  std::vector<std::uint32_t> chosen;
  for (std::uint32_t v = m + 1; v < n; ++v) {
    chosen.clear();
    const std::size_t pool_end = pool.size();
    while (chosen.size() < m) {
      const std::uint32_t t =
          pool[static_cast<std::size_t>(rng.next_below(pool_end))];
      bool fresh = true;
      for (std::uint32_t c : chosen) {
        if (c == t) fresh = false;
      }
      if (fresh) chosen.push_back(t);
    }
    for (std::uint32_t t : chosen) {
      g.add_edge(v, t, 1.0);
      pool.push_back(v);
      pool.push_back(t);
    }
  }
  return g;
}

inline SpatialGraph lattice_topology(std::uint32_t rows, std::uint32_t cols) {
  SpatialGraph g;
  g.reserve_nodes(static_cast<std::size_t>(rows) * cols);
  for (std::uint32_t r = 0; r < rows; ++r) {
    for (std::uint32_t c = 0; c < cols; ++c) {
      g.add_node(Position{static_cast<double>(c), static_cast<double>(r)});
    }
  }
  for (std::uint32_t r = 0; r < rows; ++r) {
    for (std::uint32_t c = 0; c < cols; ++c) {
      const NodeId v = r * cols + c;
      if (c + 1 < cols) g.add_edge(v, v + 1, 1.0);
      if (r + 1 < rows) g.add_edge(v, v + cols, 1.0);
    }
  }
  return g;
}

}  // namespace detail

/// Undirected unit-weight interconnection network, reproducible from
/// (model parameters, seed).
inline SpatialGraph generate_topology(const TopologySpec& spec) {
  if (spec.n == 0) {
    throw std::invalid_argument("topology needs at least one node");
  }
  SplitMix64 rng(spec.seed);
  switch (spec.model) {
    case TopologyModel::random:
      if (!(spec.p >= 0.0 && spec.p <= 1.0)) {
        throw std::invalid_argument("edge probability p must be in [0,1]");
      }
      return detail::random_topology(spec.n, spec.p, rng);
    case TopologyModel::small_world:
      if (spec.k % 2 != 0 || spec.k < 2 || spec.k >= spec.n) {
        throw std::invalid_argument("ring degree k must be even with 2 <= k < N");
      }
      if (!(spec.p_rew >= 0.0 && spec.p_rew <= 1.0)) {
        throw std::invalid_argument("rewiring probability must be in [0,1]");
      }
      return detail::small_world_topology(spec.n, spec.k, spec.p_rew, rng);
    case TopologyModel::scale_free:
      if (spec.m < 1 || spec.m >= spec.n) {
        throw std::invalid_argument("attachment count m must satisfy 1 <= m < N");
      }
      return detail::scale_free_topology(spec.n, spec.m, rng);
    case TopologyModel::lattice:
      if (spec.rows == 0 || spec.cols == 0 ||
          static_cast<std::uint64_t>(spec.rows) * spec.cols != spec.n) {
        throw std::invalid_argument("lattice needs rows*cols = N");
      }
      return detail::lattice_topology(spec.rows, spec.cols);
  }
  throw std::invalid_argument("unknown topology model");
}

}  // namespace spatnet
