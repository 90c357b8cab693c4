#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "spatnet/detail/text.hpp"
#include "spatnet/graph.hpp"
#include "spatnet/measurements.hpp"

namespace spatnet {

/// Mean and population standard deviation of each node-feature entry over
/// a region, interleaved: [deg_mu, deg_sd, str_mu, str_sd, cc_mu, cc_sd,
/// h2_mu, h2_sd, h3_mu, h3_sd].
using RegionFeature = std::array<double, 10>;

struct LabeledRegionFeature {
  std::string label;
  RegionFeature feature{};
};

/// Componentwise mean/std of node_feature_vector over the subset, with the
/// vectors evaluated in g as given.
inline RegionFeature extract_region_features(const SpatialGraph& g,
                                             const std::vector<NodeId>& subset) {
  if (subset.empty()) {
    throw std::invalid_argument("region feature extraction needs a nonempty subset");
  }
  std::vector<std::array<double, 5>> rows;
  rows.reserve(subset.size());
  for (NodeId v : subset) {
    const NodeFeatureVector f = node_feature_vector(g, v);
    rows.push_back({f.degree, f.strength, f.clustering, f.hdeg2, f.hdeg3});
  }
  RegionFeature out{};
  const double n = static_cast<double>(rows.size());
  for (std::size_t d = 0; d < 5; ++d) {
    double mean = 0.0;
    for (const auto& r : rows) mean += r[d];
    mean /= n;
    double var = 0.0;
    for (const auto& r : rows) var += (r[d] - mean) * (r[d] - mean);
    var /= n;
    out[2 * d] = mean;
    out[2 * d + 1] = std::sqrt(var);
  }
  return out;
}

/// Subgraph spanned by the subset, nodes renumbered 0..k-1 in subset
/// order; positions carry over when present.
inline SpatialGraph induced_subgraph(const SpatialGraph& g,
                                     const std::vector<NodeId>& subset) {
  constexpr std::int64_t kAbsent = -1;
  std::vector<std::int64_t> local(g.node_count(), kAbsent);
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (subset[i] >= g.node_count()) {
      throw std::out_of_range("subset node out of range");
    }
    if (local[subset[i]] != kAbsent) {
      throw std::invalid_argument("duplicate node in subset");
    }
    local[subset[i]] = static_cast<std::int64_t>(i);
  }
  SpatialGraph sub(g.directed(), g.allows_self_loops());
  sub.reserve_nodes(subset.size());
  for (NodeId v : subset) {
    if (g.has_positions()) {
      sub.add_node(g.position(v));
    } else {
      sub.add_node();
    }
  }
  for (NodeId v : subset) {
    for (const auto& e : g.neighbors(v)) {
      if (local[e.to] == kAbsent) continue;
      const NodeId a = static_cast<NodeId>(local[v]);
      const NodeId b = static_cast<NodeId>(local[e.to]);
      if (g.directed() || a <= b) sub.add_edge(a, b, e.weight);
    }
  }
  return sub;
}

/// Label of the Euclidean-nearest centroid after standardizing every
/// dimension by the centroid set's mean/std; dimensions on which all
/// centroids agree exactly are dropped. Exact distance ties go to the
/// lexicographically smallest label.
inline std::string classify_nearest_centroid(
    const RegionFeature& features,
    const std::vector<LabeledRegionFeature>& centroids) {
  if (centroids.empty()) {
    throw std::invalid_argument("centroid list is empty");
  }
  const double n = static_cast<double>(centroids.size());
  std::array<double, 10> mu{}, sd{};
  std::array<bool, 10> keep{};
  for (std::size_t d = 0; d < 10; ++d) {
    bool constant = true;
    for (const auto& c : centroids) {
      mu[d] += c.feature[d];
      if (c.feature[d] != centroids.front().feature[d]) constant = false;
    }
    mu[d] /= n;
    double var = 0.0;
    for (const auto& c : centroids) {
      var += (c.feature[d] - mu[d]) * (c.feature[d] - mu[d]);
    }
    sd[d] = std::sqrt(var / n);
    keep[d] = !constant;
  }
  const auto distance2 = [&](const RegionFeature& a, const RegionFeature& b) {
    double acc = 0.0;
    for (std::size_t d = 0; d < 10; ++d) {
      if (!keep[d]) continue;
      const double diff = (a[d] - b[d]) / sd[d];
      acc += diff * diff;
    }
    return acc;
  };
  const LabeledRegionFeature* best = &centroids.front();
  double best_d = distance2(features, best->feature);
  for (const auto& c : centroids) {
    const double d = distance2(features, c.feature);
    if (d < best_d || (d == best_d && c.label < best->label)) {
      best = &c;
      best_d = d;
    }
  }
  return best->label;
}

inline void write_region_features_csv(std::ostream& out,
                                      const std::vector<RegionFeature>& rows) {
  out << "region,deg_mu,deg_sd,str_mu,str_sd,cc_mu,cc_sd,h2_mu,h2_sd,h3_mu,h3_sd\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << i;
    for (double v : rows[i]) out << ',' << detail::format_double(v);
    out << '\n';
  }
}

inline void write_centroids_csv(std::ostream& out,
                                const std::vector<LabeledRegionFeature>& rows) {
  out << "label,deg_mu,deg_sd,str_mu,str_sd,cc_mu,cc_sd,h2_mu,h2_sd,h3_mu,h3_sd\n";
  for (const auto& r : rows) {
    out << r.label;
    for (double v : r.feature) out << ',' << detail::format_double(v);
    out << '\n';
  }
}

inline std::vector<LabeledRegionFeature> read_centroids_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) ||
      detail::trim(line) !=
          "label,deg_mu,deg_sd,str_mu,str_sd,cc_mu,cc_sd,h2_mu,h2_sd,h3_mu,h3_sd") {
    throw std::runtime_error("centroid CSV: bad or missing header");
  }
  std::vector<LabeledRegionFeature> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string trimmed{detail::trim(line)};
    if (trimmed.empty()) continue;
    const auto fields = detail::split(trimmed, ',');
    if (fields.size() != 11) {
      throw std::runtime_error("centroid CSV line " + std::to_string(lineno) +
                               ": expected 11 fields");
    }
    LabeledRegionFeature row;
    row.label = std::string(fields[0]);
    if (row.label.empty()) {
      throw std::runtime_error("centroid CSV line " + std::to_string(lineno) +
                               ": empty label");
    }
    for (std::size_t d = 0; d < 10; ++d) {
      row.feature[d] = detail::parse_double(
          fields[d + 1], "centroid CSV line " + std::to_string(lineno));
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace spatnet
