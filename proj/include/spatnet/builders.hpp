#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "spatnet/graph.hpp"
#include "spatnet/image.hpp"

namespace spatnet {

/// Per-pixel gradient magnitude plus line orientation in [0, pi).
/// The signed responses gx, gy are kept alongside the folded orientation.
struct GradientField {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> magnitude;
  std::vector<double> orientation;
  std::vector<double> gx;
  std::vector<double> gy;

  std::size_t index(std::size_t x, std::size_t y) const { return y * width + x; }
};

struct PixelCoord {
  std::uint32_t x = 0;
  std::uint32_t y = 0;
  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

struct EdgePixel {
  PixelCoord pos;
  double orientation = 0.0;  // normal (gradient) direction folded to [0, pi)
  double magnitude = 0.0;
};

using EdgePixelSet = std::vector<EdgePixel>;

enum class LineMode { tangent, normal };

namespace detail {

inline double fold_to_half_turn(double angle) {
  const double pi = std::numbers::pi;
  double a = std::fmod(angle, pi);
  if (a < 0.0) a += pi;
  if (a >= pi) a = 0.0;
  return a;
}

inline double replicate_sample(const GrayImage& img, long x, long y) {
  const long w = static_cast<long>(img.width());
  const long h = static_cast<long>(img.height());
  x = x < 0 ? 0 : (x >= w ? w - 1 : x);
  y = y < 0 ? 0 : (y >= h ? h - 1 : y);
  return static_cast<double>(
      img.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)));
}

}  // namespace detail

/// 3x3 Sobel gradient with replicate padding at the borders.
inline GradientField estimate_gradient(const GrayImage& img) {
  if (img.width() < 3 || img.height() < 3) {
    throw std::invalid_argument("image smaller than 3x3 gradient kernel");
  }
  GradientField field;
  field.width = img.width();
  field.height = img.height();
  const std::size_t n = img.pixel_count();
  field.magnitude.resize(n);
  field.orientation.resize(n);
  field.gx.resize(n);
  field.gy.resize(n);
  for (long y = 0; y < static_cast<long>(img.height()); ++y) {
    for (long x = 0; x < static_cast<long>(img.width()); ++x) {
      const auto s = [&](long dx, long dy) {
        return detail::replicate_sample(img, x + dx, y + dy);
      };
      const double gx = (s(1, -1) + 2.0 * s(1, 0) + s(1, 1)) -
                        (s(-1, -1) + 2.0 * s(-1, 0) + s(-1, 1));
      const double gy = (s(-1, 1) + 2.0 * s(0, 1) + s(1, 1)) -
                        (s(-1, -1) + 2.0 * s(0, -1) + s(1, -1));
      const std::size_t i = field.index(static_cast<std::size_t>(x),
                                        static_cast<std::size_t>(y));
      field.gx[i] = gx;
      field.gy[i] = gy;
      field.magnitude[i] = std::hypot(gx, gy);
      field.orientation[i] = field.magnitude[i] == 0.0
                                 ? 0.0
                                 : detail::fold_to_half_turn(std::atan2(gy, gx));
    }
  }
  return field;
}

/// High-contrast pixels: magnitude >= contrast_fraction * max magnitude,
/// in scan-line order. A zero-gradient field yields the empty set.
inline EdgePixelSet select_edge_pixels(const GradientField& field,
                                       double contrast_fraction) {
  if (!(contrast_fraction > 0.0) || contrast_fraction > 1.0) {
    throw std::invalid_argument("contrast fraction must be in (0,1]");
  }
  double max_mag = 0.0;
  for (double m : field.magnitude) max_mag = std::max(max_mag, m);
  EdgePixelSet result;
  if (max_mag == 0.0) return result;
  const double threshold = contrast_fraction * max_mag;
  for (std::uint32_t y = 0; y < field.height; ++y) {
    for (std::uint32_t x = 0; x < field.width; ++x) {
      const std::size_t i = field.index(x, y);
      if (field.magnitude[i] >= threshold) {
        result.push_back(EdgePixel{{x, y}, field.orientation[i], field.magnitude[i]});
      }
    }
  }
  return result;
}

/// Pixels whose center lies within 0.5 px of the infinite line through p
/// with direction (cos alpha, sin alpha), clipped to width x height.
/// Invariant under alpha -> alpha + pi; always contains p.
inline std::vector<PixelCoord> rasterize_line(PixelCoord p, double alpha,
                                              std::size_t width,
                                              std::size_t height) {
  if (p.x >= width || p.y >= height) {
    throw std::invalid_argument("line origin out of bounds");
  }
  const double dx = std::cos(alpha);
  const double dy = std::sin(alpha);
  std::vector<PixelCoord> out;
  const auto emit_range = [](double lo, double hi, std::size_t limit,
                             auto&& fn) {
    long first = static_cast<long>(std::ceil(std::min(lo, hi)));
    long last = static_cast<long>(std::floor(std::max(lo, hi)));
    if (first < 0) first = 0;
    if (last >= static_cast<long>(limit)) last = static_cast<long>(limit) - 1;
    for (long v = first; v <= last; ++v) fn(static_cast<std::uint32_t>(v));
  };
  if (std::abs(dx) >= std::abs(dy)) {
    // Mostly horizontal: one y-interval per column x.
    for (std::uint32_t x = 0; x < width; ++x) {
      const double a = (static_cast<double>(x) - p.x) * (-dy);
      const double lo = p.y + (-0.5 - a) / dx;
      const double hi = p.y + (0.5 - a) / dx;
      emit_range(lo, hi, height, [&](std::uint32_t y) {
        out.push_back(PixelCoord{x, y});
      });
    }
  } else {
    for (std::uint32_t y = 0; y < height; ++y) {
      const double b = (static_cast<double>(y) - p.y) * dx;
      const double lo = p.x + (-0.5 - b) / (-dy);
      const double hi = p.x + (0.5 - b) / (-dy);
      emit_range(lo, hi, width, [&](std::uint32_t x) {
        out.push_back(PixelCoord{x, y});
      });
    }
  }
  return out;
}

/// Optional extra features for the similarity weight. The feature distance
/// is gray_weight*|dg| + gradient_weight*|dmag| + dispersion_weight*|dsd|,
/// and the edge weight is 1/(1 + distance). Defaults reduce to the
/// gray-level-only weight.
struct SimilarityOptions {
  double gray_weight = 1.0;
  double gradient_weight = 0.0;
  double dispersion_weight = 0.0;
  std::size_t dispersion_window = 3;  // odd window side length, in pixels
};

namespace detail {

inline std::vector<double> local_dispersion(const GrayImage& img,
                                            std::size_t window) {
  if (window % 2 == 0 || window == 0) {
    throw std::invalid_argument("dispersion window must be odd");
  }
  const long k = static_cast<long>(window / 2);
  std::vector<double> out(img.pixel_count());
  for (long y = 0; y < static_cast<long>(img.height()); ++y) {
    for (long x = 0; x < static_cast<long>(img.width()); ++x) {
      double sum = 0.0, sum2 = 0.0;
      const double count = static_cast<double>(window * window);
      for (long dy = -k; dy <= k; ++dy) {
        for (long dx = -k; dx <= k; ++dx) {
          const double v = replicate_sample(img, x + dx, y + dy);
          sum += v;
          sum2 += v * v;
        }
      }
      const double mean = sum / count;
      const double var = std::max(0.0, sum2 / count - mean * mean);
      out[static_cast<std::size_t>(y) * img.width() +
          static_cast<std::size_t>(x)] = std::sqrt(var);
    }
  }
  return out;
}

}  // namespace detail

/// Pixel-similarity network: one node per pixel; pixel pairs within
/// Euclidean distance radius are linked with weight 1/(1 + feature
/// distance) when that weight reaches the threshold. Undirected.
inline SpatialGraph build_pixel_similarity_network(
    const GrayImage& img, double threshold, double radius,
    const SimilarityOptions& opts = {}) {
  if (!(threshold > 0.0) || threshold > 1.0) {
    throw std::invalid_argument("similarity threshold must be in (0,1]");
  }
  if (!(radius >= 1.0)) {
    throw std::invalid_argument("radius must be >= 1 pixel");
  }
  const std::size_t w = img.width();
  const std::size_t h = img.height();

  std::vector<double> grad_mag;
  if (opts.gradient_weight != 0.0) {
    grad_mag = estimate_gradient(img).magnitude;
  }
  std::vector<double> dispersion;
  if (opts.dispersion_weight != 0.0) {
    dispersion = detail::local_dispersion(img, opts.dispersion_window);
  }

  SpatialGraph g;
  g.reserve_nodes(w * h);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      g.add_node(Position{static_cast<double>(x), static_cast<double>(y)});
    }
  }

  const auto feature_distance = [&](std::size_t i, std::size_t j) {
    double d = opts.gray_weight *
               std::abs(static_cast<double>(img.samples()[i]) -
                        static_cast<double>(img.samples()[j]));
    if (!grad_mag.empty()) {
      d += opts.gradient_weight * std::abs(grad_mag[i] - grad_mag[j]);
    }
    if (!dispersion.empty()) {
      d += opts.dispersion_weight * std::abs(dispersion[i] - dispersion[j]);
    }
    return d;
  };

  const long reach = static_cast<long>(std::floor(radius));
  const double r2 = radius * radius;
  for (long y = 0; y < static_cast<long>(h); ++y) {
    for (long x = 0; x < static_cast<long>(w); ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w +
                            static_cast<std::size_t>(x);
      // Forward half-neighborhood so each unordered pair is visited once.
      for (long dy = 0; dy <= reach; ++dy) {
        for (long dx = (dy == 0 ? 1 : -reach); dx <= reach; ++dx) {
          if (static_cast<double>(dx * dx + dy * dy) > r2) continue;
          const long nx = x + dx;
          const long ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= static_cast<long>(w) ||
              ny >= static_cast<long>(h)) {
            continue;
          }
          const std::size_t j = static_cast<std::size_t>(ny) * w +
                                static_cast<std::size_t>(nx);
          const double weight = 1.0 / (1.0 + feature_distance(i, j));
          if (weight >= threshold) {
            g.add_edge(static_cast<NodeId>(i), static_cast<NodeId>(j), weight);
          }
        }
      }
    }
  }
  return g;
}

/// Orientation-line network over edge pixels: every pixel is linked to all
/// other edge pixels covered by the straight line through it. In tangent
/// mode the line runs along the contour (normal + pi/2); in normal mode it
/// follows the gradient direction. Unit weights, undirected.
inline SpatialGraph build_orientation_line_network(const EdgePixelSet& edges,
                                                   std::size_t width,
                                                   std::size_t height,
                                                   LineMode mode) {
  if (edges.empty()) {
    throw std::invalid_argument("empty edge-pixel set");
  }
  constexpr std::int64_t kNoNode = -1;
  std::vector<std::int64_t> node_at(width * height, kNoNode);
  SpatialGraph g;
  g.reserve_nodes(edges.size());
  for (const EdgePixel& e : edges) {
    if (e.pos.x >= width || e.pos.y >= height) {
      throw std::invalid_argument("edge pixel out of bounds");
    }
    std::int64_t& slot = node_at[static_cast<std::size_t>(e.pos.y) * width + e.pos.x];
    if (slot != kNoNode) {
      throw std::invalid_argument("duplicate edge-pixel coordinate");
    }
    slot = static_cast<std::int64_t>(g.add_node(
        Position{static_cast<double>(e.pos.x), static_cast<double>(e.pos.y)}));
  }
  const double half_pi = std::numbers::pi / 2.0;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const double alpha = mode == LineMode::tangent
                             ? edges[i].orientation + half_pi
                             : edges[i].orientation;
    for (const PixelCoord& c : rasterize_line(edges[i].pos, alpha, width, height)) {
      const std::int64_t j = node_at[static_cast<std::size_t>(c.y) * width + c.x];
      if (j != kNoNode && j != static_cast<std::int64_t>(i)) {
        g.add_edge(static_cast<NodeId>(i), static_cast<NodeId>(j), 1.0);
      }
    }
  }
  return g;
}

}  // namespace spatnet
