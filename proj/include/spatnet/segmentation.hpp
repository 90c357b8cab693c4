#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "spatnet/graph.hpp"
#include "spatnet/image.hpp"
#include "spatnet/rng.hpp"

namespace spatnet {

/// Per-node community labels, dense from 0 in order of first occurrence.
using Partition = std::vector<std::uint32_t>;

enum class CommunityMethod { greedy_modularity, label_propagation };

namespace detail {

inline Partition densify_labels(const std::vector<std::uint32_t>& raw) {
  Partition out(raw.size());
  std::map<std::uint32_t, std::uint32_t> remap;
  for (std::size_t v = 0; v < raw.size(); ++v) {
    auto [it, inserted] = remap.try_emplace(
        raw[v], static_cast<std::uint32_t>(remap.size()));
    out[v] = it->second;
  }
  return out;
}

}  // namespace detail

/// Newman's Q = sum_c (e_cc - a_c^2), weighted: e_cc is the fraction of
/// edge weight inside community c, a_c the fraction of endpoint strength.
inline double modularity(const SpatialGraph& g, const Partition& p) {
  if (g.directed()) {
    throw std::invalid_argument("modularity requires an undirected graph");
  }
  if (g.node_count() == 0) {
    throw std::invalid_argument("modularity of an empty graph is undefined");
  }
  if (p.size() != g.node_count()) {
    throw std::invalid_argument("partition size mismatch");
  }
  const double total_w = g.total_strength() / 2.0;
  if (!(total_w > 0.0)) {
    throw std::invalid_argument("modularity needs at least one edge");
  }
  std::uint32_t labels = 0;
  for (std::uint32_t c : p) labels = std::max(labels, c + 1);
  std::vector<double> internal(labels, 0.0);
  std::vector<double> endpoint(labels, 0.0);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    endpoint[p[v]] += g.strength(v);
    for (const auto& e : g.neighbors(v)) {
      if (e.to > v && p[e.to] == p[v]) internal[p[v]] += e.weight;
    }
  }
  double q = 0.0;
  for (std::uint32_t c = 0; c < labels; ++c) {
    const double a = endpoint[c] / (2.0 * total_w);
    q += internal[c] / total_w - a * a;
  }
  return q;
}

namespace detail {

/// Agglomerative modularity maximization. Communities start as single
/// nodes labeled by node id; the adjacent pair with the largest positive
/// merge gain dQ = w_ab/W - 2*a_a*a_b is merged (ties: smallest label
/// pair), the merged community keeping the smaller label, until no
/// positive gain remains.
inline std::vector<std::uint32_t> greedy_modularity_labels(const SpatialGraph& g) {
  const std::size_t n = g.node_count();
  const double total_w = g.total_strength() / 2.0;
  struct Community {
    bool alive = true;
    double endpoint_frac = 0.0;             // a_c
    std::map<std::uint32_t, double> nbr_w;  // adjacent community -> w_ab/W
  };
  std::vector<Community> comms(n);
  std::vector<std::uint32_t> label(n);
  for (NodeId v = 0; v < n; ++v) {
    label[v] = v;
    comms[v].endpoint_frac = g.strength(v) / (2.0 * total_w);
    for (const auto& e : g.neighbors(v)) {
      if (e.to != v) comms[v].nbr_w[e.to] = e.weight / total_w;
    }
  }
  while (true) {
    double best_gain = 0.0;
    std::uint32_t best_a = 0, best_b = 0;
    bool found = false;
    for (std::uint32_t a = 0; a < n; ++a) {
      if (!comms[a].alive) continue;
      for (const auto& [b, w_ab] : comms[a].nbr_w) {
        if (b < a) continue;
        const double gain =
            w_ab - 2.0 * comms[a].endpoint_frac * comms[b].endpoint_frac;
        if (gain > best_gain) {
          best_gain = gain;
          best_a = a;
          best_b = b;
          found = true;
        }
      }
    }
    if (!found) break;
    Community& keep = comms[best_a];
    Community& gone = comms[best_b];
    keep.endpoint_frac += gone.endpoint_frac;
    keep.nbr_w.erase(best_b);
    for (const auto& [x, w] : gone.nbr_w) {
      if (x == best_a) continue;
      keep.nbr_w[x] += w;
      comms[x].nbr_w.erase(best_b);
      comms[x].nbr_w[best_a] = keep.nbr_w[x];
    }
    gone.alive = false;
    gone.nbr_w.clear();
    for (std::uint32_t& l : label) {
      if (l == best_b) l = best_a;
    }
  }
  return label;
}

/// Asynchronous weighted label propagation: each pass visits nodes in a
/// freshly shuffled order and adopts the label with the largest total
/// incident weight (ties: smallest label). Stops on a fixed point or
/// after 100 passes.
inline std::vector<std::uint32_t> label_propagation_labels(const SpatialGraph& g,
                                                           std::uint64_t seed) {
  const std::size_t n = g.node_count();
  std::vector<std::uint32_t> label(n);
  for (NodeId v = 0; v < n; ++v) label[v] = v;
  std::vector<NodeId> order(n);
  for (NodeId v = 0; v < n; ++v) order[v] = v;
  SplitMix64 rng(seed);
  std::map<std::uint32_t, double> votes;
  for (int pass = 0; pass < 100; ++pass) {
    rng.shuffle(order);
    bool changed = false;
    for (NodeId v : order) {
      if (g.neighbors(v).empty()) continue;
      votes.clear();
      for (const auto& e : g.neighbors(v)) votes[label[e.to]] += e.weight;
      std::uint32_t best = label[v];
      double best_w = -1.0;
      for (const auto& [l, w] : votes) {
        if (w > best_w) {
          best_w = w;
          best = l;
        }
      }
      if (best != label[v]) {
        label[v] = best;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return label;
}

}  // namespace detail

/// Detected communities with dense labels. Deterministic for a given
/// (method, seed); greedy_modularity ignores the seed.
inline Partition detect_communities(const SpatialGraph& g, CommunityMethod method,
                                    std::uint64_t seed = 42) {
  if (g.directed()) {
    throw std::invalid_argument("community detection requires an undirected graph");
  }
  if (g.node_count() == 0) {
    throw std::invalid_argument("community detection needs at least one node");
  }
  if (g.edge_count() == 0) {
    std::vector<std::uint32_t> singletons(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) singletons[v] = v;
    return detail::densify_labels(singletons);
  }
  const auto raw = method == CommunityMethod::greedy_modularity
                       ? detail::greedy_modularity_labels(g)
                       : detail::label_propagation_labels(g, seed);
  return detail::densify_labels(raw);
}

/// Communities smaller than min_size are absorbed into the neighboring
/// community they share the most edge weight with (ties: smallest label),
/// repeating until stable. Undersized communities with no external links
/// are kept.
inline Partition merge_small_communities(const SpatialGraph& g, const Partition& p,
                                         std::size_t min_size) {
  if (p.size() != g.node_count()) {
    throw std::invalid_argument("partition size mismatch");
  }
  std::vector<std::uint32_t> label(p.begin(), p.end());
  while (true) {
    std::uint32_t count = 0;
    for (std::uint32_t l : label) count = std::max(count, l + 1);
    std::vector<std::size_t> size(count, 0);
    for (std::uint32_t l : label) ++size[l];
    bool merged = false;
    for (std::uint32_t c = 0; c < count && !merged; ++c) {
      if (size[c] == 0 || size[c] >= min_size) continue;
      std::map<std::uint32_t, double> link;
      for (NodeId v = 0; v < g.node_count(); ++v) {
        if (label[v] != c) continue;
        for (const auto& e : g.neighbors(v)) {
          if (label[e.to] != c) link[label[e.to]] += e.weight;
        }
      }
      if (link.empty()) continue;
      std::uint32_t best = link.begin()->first;
      double best_w = link.begin()->second;
      for (const auto& [l, w] : link) {
        if (w > best_w) {
          best = l;
          best_w = w;
        }
      }
      for (std::uint32_t& l : label) {
        if (l == c) l = best;
      }
      merged = true;
    }
    if (!merged) break;
  }
  return detail::densify_labels(label);
}

/// Width x height region labels; pixels without a node hold `background`.
struct LabelImage {
  static constexpr std::int32_t background = -1;
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::int32_t> labels;

  LabelImage(std::size_t w, std::size_t h)
      : width(w), height(h), labels(w * h, background) {}
  std::int32_t at(std::size_t x, std::size_t y) const {
    return labels.at(y * width + x);
  }
};

/// Paints each node's label at its pixel position. Output labels are
/// re-indexed by decreasing community size (ties: smaller input label
/// first).
inline LabelImage partition_to_label_image(const Partition& p,
                                           const SpatialGraph& g,
                                           std::size_t width, std::size_t height) {
  if (p.size() != g.node_count()) {
    throw std::invalid_argument("partition size mismatch");
  }
  if (!g.has_positions()) {
    throw std::invalid_argument("graph nodes carry no pixel positions");
  }
  std::uint32_t count = 0;
  for (std::uint32_t l : p) count = std::max(count, l + 1);
  std::vector<std::size_t> size(count, 0);
  for (std::uint32_t l : p) ++size[l];
  std::vector<std::uint32_t> by_size(count);
  for (std::uint32_t c = 0; c < count; ++c) by_size[c] = c;
  std::stable_sort(by_size.begin(), by_size.end(),
                   [&](std::uint32_t a, std::uint32_t b) {
                     return size[a] > size[b];
                   });
  std::vector<std::uint32_t> rank(count);
  for (std::uint32_t i = 0; i < count; ++i) rank[by_size[i]] = i;

  LabelImage img(width, height);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const Position pos = g.position(v);
    const long x = std::lround(pos.x);
    const long y = std::lround(pos.y);
    if (x < 0 || y < 0 || x >= static_cast<long>(width) ||
        y >= static_cast<long>(height)) {
      throw std::invalid_argument("node position outside image dimensions");
    }
    img.labels[static_cast<std::size_t>(y) * width + static_cast<std::size_t>(x)] =
        static_cast<std::int32_t>(rank[p[v]]);
  }
  return img;
}

/// 8-bit preview: label modulo 255, background pixels 255.
inline GrayImage label_preview(const LabelImage& img) {
  GrayImage out(img.width, img.height);
  for (std::size_t y = 0; y < img.height; ++y) {
    for (std::size_t x = 0; x < img.width; ++x) {
      const std::int32_t l = img.at(x, y);
      out.set(x, y, l == LabelImage::background
                        ? std::uint8_t{255}
                        : static_cast<std::uint8_t>(l % 255));
    }
  }
  return out;
}

inline void write_label_csv(std::ostream& out, const LabelImage& img) {
  out << "x,y,label\n";
  for (std::size_t y = 0; y < img.height; ++y) {
    for (std::size_t x = 0; x < img.width; ++x) {
      out << x << ',' << y << ',' << img.at(x, y) << '\n';
    }
  }
}

/// Fraction of node pairs on which two partitions agree (both together or
/// both apart).
inline double rand_index(const Partition& a, const Partition& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("partition size mismatch");
  }
  if (a.size() < 2) {
    throw std::invalid_argument("rand index needs at least two nodes");
  }
  std::uint64_t agree = 0;
  std::uint64_t pairs = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      ++pairs;
      if ((a[i] == a[j]) == (b[i] == b[j])) ++agree;
    }
  }
  return static_cast<double>(agree) / static_cast<double>(pairs);
}

}  // namespace spatnet
