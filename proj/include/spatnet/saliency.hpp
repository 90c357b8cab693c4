#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "spatnet/builders.hpp"
#include "spatnet/graph.hpp"
#include "spatnet/image.hpp"

namespace spatnet {

/// Per-node walk bias, strictly positive. Empty means all ones.
using SaliencyIndexVector = std::vector<double>;

/// Column-stochastic transition matrix of the biased random walk,
/// stored column-major sparse. node_mass carries each node's strength
/// so disconnected components can be weighted after the per-component
/// solve; empty mass means uniform.
struct StochasticMatrix {
  struct Entry {
    NodeId row = 0;
    double value = 0.0;
  };
  std::vector<std::vector<Entry>> columns;
  std::vector<double> node_mass;

  std::size_t size() const { return columns.size(); }
};

/// W_ij = w_ij * s_i / sum_m(w_mj * s_m): from node j, move along an
/// emanating edge with probability proportional to edge weight times the
/// target's saliency index.
inline StochasticMatrix build_stochastic_matrix(
    const SpatialGraph& g, const SaliencyIndexVector& s = {}) {
  if (g.node_count() == 0) {
    throw std::invalid_argument("stochastic matrix needs at least one node");
  }
  if (!s.empty() && s.size() != g.node_count()) {
    throw std::invalid_argument("saliency index vector size mismatch");
  }
  const auto bias = [&](NodeId v) { return s.empty() ? 1.0 : s[v]; };
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (!(bias(v) > 0.0) || !std::isfinite(bias(v))) {
      throw std::invalid_argument("saliency indices must be positive finite");
    }
  }
  StochasticMatrix w;
  w.columns.resize(g.node_count());
  w.node_mass.resize(g.node_count());
  for (NodeId j = 0; j < g.node_count(); ++j) {
    w.node_mass[j] = g.strength(j);
    double denom = 0.0;
    for (const auto& e : g.neighbors(j)) denom += e.weight * bias(e.to);
    if (!(denom > 0.0)) {
      throw std::invalid_argument("node " + std::to_string(j) +
                                  " has no outgoing mass");
    }
    auto& col = w.columns[j];
    col.reserve(g.neighbors(j).size());
    for (const auto& e : g.neighbors(j)) {
      col.push_back({e.to, e.weight * bias(e.to) / denom});
    }
  }
  return w;
}

namespace detail {

inline void check_stochastic(const StochasticMatrix& w) {
  for (std::size_t j = 0; j < w.size(); ++j) {
    double sum = 0.0;
    for (const auto& e : w.columns[j]) {
      if (e.row >= w.size() || !(e.value >= 0.0)) {
        throw std::invalid_argument("matrix is not column-stochastic");
      }
      sum += e.value;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw std::invalid_argument("matrix is not column-stochastic");
    }
  }
}

/// Connected components of the symmetrized sparsity pattern.
inline std::vector<std::uint32_t> matrix_components(const StochasticMatrix& w) {
  const std::size_t n = w.size();
  std::vector<std::vector<NodeId>> adj(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (const auto& e : w.columns[j]) {
      if (e.row != j) {
        adj[j].push_back(e.row);
        adj[e.row].push_back(static_cast<NodeId>(j));
      }
    }
  }
  constexpr std::uint32_t kUnseen = 0xffffffffu;
  std::vector<std::uint32_t> comp(n, kUnseen);
  std::uint32_t next = 0;
  std::vector<NodeId> stack;
  for (std::size_t start = 0; start < n; ++start) {
    if (comp[start] != kUnseen) continue;
    comp[start] = next;
    stack.push_back(static_cast<NodeId>(start));
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      for (NodeId u : adj[v]) {
        if (comp[u] == kUnseen) {
          comp[u] = next;
          stack.push_back(u);
        }
      }
    }
    ++next;
  }
  return comp;
}

}  // namespace detail

/// Solves q = Wq by lazy power iteration, (W + I)/2, which shares the
/// fixed points of W but also converges on bipartite components. Each
/// connected component is solved on its own from the uniform start and
/// stops once the L1 step falls to tol; the iterate before that step has
/// residual ||Wq - q||_1 = 2 * step <= 2 * tol. Component results are
/// scaled by the component's share of total node mass.
inline std::vector<double> stationary_distribution(const StochasticMatrix& w,
                                                   double tol = 1e-10,
                                                   std::uint64_t max_iter = 100000) {
  if (w.size() == 0) {
    throw std::invalid_argument("empty stochastic matrix");
  }
  if (!(tol > 0.0)) {
    throw std::invalid_argument("tolerance must be positive");
  }
  detail::check_stochastic(w);
  if (!w.node_mass.empty() && w.node_mass.size() != w.size()) {
    throw std::invalid_argument("node mass vector size mismatch");
  }
  const auto mass = [&](std::size_t v) {
    return w.node_mass.empty() ? 1.0 : w.node_mass[v];
  };
  double total_mass = 0.0;
  for (std::size_t v = 0; v < w.size(); ++v) total_mass += mass(v);
  if (!(total_mass > 0.0)) {
    throw std::invalid_argument("total node mass must be positive");
  }

  const auto comp = detail::matrix_components(w);
  std::uint32_t comp_count = 0;
  for (std::uint32_t c : comp) comp_count = std::max(comp_count, c + 1);

  std::vector<std::vector<NodeId>> members(comp_count);
  for (std::size_t v = 0; v < w.size(); ++v) {
    members[comp[v]].push_back(static_cast<NodeId>(v));
  }

  std::vector<double> out(w.size(), 0.0);
  std::vector<double> q(w.size(), 0.0);
  std::vector<double> next(w.size(), 0.0);
  for (std::uint32_t c = 0; c < comp_count; ++c) {
    const auto& nodes = members[c];
    double comp_mass = 0.0;
    for (NodeId v : nodes) comp_mass += mass(v);
    const double share = comp_mass / total_mass;

    for (NodeId v : nodes) q[v] = 1.0 / static_cast<double>(nodes.size());
    bool converged = false;
    for (std::uint64_t it = 0; it < max_iter; ++it) {
      for (NodeId v : nodes) next[v] = 0.0;
      for (NodeId j : nodes) {
        for (const auto& e : w.columns[j]) next[e.row] += e.value * q[j];
      }
      double step = 0.0;
      for (NodeId v : nodes) {
        next[v] = 0.5 * (next[v] + q[v]);
        step += std::abs(next[v] - q[v]);
      }
      if (step <= tol) {
        converged = true;
        break;
      }
      for (NodeId v : nodes) q[v] = next[v];
    }
    if (!converged) {
      throw std::runtime_error(
          "stationary distribution did not converge within " +
          std::to_string(max_iter) + " iterations");
    }
    for (NodeId v : nodes) {
      out[v] = q[v] * share;
      q[v] = 0.0;
    }
  }
  return out;
}

/// Renders occupancy onto an image: walk pixels are rescaled so the
/// minimum maps to 1 and the maximum to 255 (a constant q maps to 255);
/// every other pixel is 0.
inline GrayImage saliency_map(std::size_t width, std::size_t height,
                              const EdgePixelSet& walk_pixels,
                              const std::vector<double>& q) {
  if (walk_pixels.size() != q.size()) {
    throw std::invalid_argument("occupancy vector does not match walk pixels");
  }
  GrayImage img(width, height);
  if (walk_pixels.empty()) return img;
  double lo = q[0], hi = q[0];
  for (double v : q) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  for (std::size_t i = 0; i < walk_pixels.size(); ++i) {
    const auto& p = walk_pixels[i].pos;
    if (p.x >= width || p.y >= height) {
      throw std::invalid_argument("walk pixel out of bounds");
    }
    const long value =
        hi == lo ? 255 : std::lround(1.0 + (q[i] - lo) * 254.0 / (hi - lo));
    img.set(p.x, p.y, static_cast<std::uint8_t>(value));
  }
  return img;
}

}  // namespace spatnet
