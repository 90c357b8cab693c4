#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "spatnet/builders.hpp"
#include "spatnet/rng.hpp"

using namespace spatnet;

namespace {

constexpr double kPi = std::numbers::pi;

GrayImage from_rows(const std::vector<std::vector<int>>& rows) {
  GrayImage img(rows[0].size(), rows.size());
  for (std::size_t y = 0; y < rows.size(); ++y) {
    for (std::size_t x = 0; x < rows[y].size(); ++x) {
      img.set(x, y, static_cast<std::uint8_t>(rows[y][x]));
    }
  }
  return img;
}

bool sorted_equal(std::vector<PixelCoord> a, std::vector<PixelCoord> b) {
  const auto key = [](const PixelCoord& c) {
    return (static_cast<std::uint64_t>(c.y) << 32) | c.x;
  };
  const auto less = [&](const PixelCoord& l, const PixelCoord& r) {
    return key(l) < key(r);
  };
  std::sort(a.begin(), a.end(), less);
  std::sort(b.begin(), b.end(), less);
  return a == b;
}

/// Oracle: all pixel centers within 0.5 of the infinite line through p.
std::vector<PixelCoord> covered_pixels(PixelCoord p, double alpha,
                                       std::size_t width, std::size_t height) {
  std::vector<PixelCoord> out;
  const double nx = -std::sin(alpha);
  const double ny = std::cos(alpha);
  for (std::uint32_t y = 0; y < height; ++y) {
    for (std::uint32_t x = 0; x < width; ++x) {
      const double d = (static_cast<double>(x) - p.x) * nx +
                       (static_cast<double>(y) - p.y) * ny;
      if (std::abs(d) <= 0.5) out.push_back(PixelCoord{x, y});
    }
  }
  return out;
}

}  // namespace

TEST_CASE("sobel responds to a vertical step along x only") {
  const GrayImage img = from_rows({{0, 0, 255}, {0, 0, 255}, {0, 0, 255}});
  const GradientField f = estimate_gradient(img);
  CHECK(f.gx[f.index(1, 1)] == 1020.0);
  CHECK(f.gy[f.index(1, 1)] == 0.0);
  CHECK(f.magnitude[f.index(1, 1)] == 1020.0);
  CHECK(f.orientation[f.index(1, 1)] == 0.0);
}

TEST_CASE("sobel responds to a horizontal step along y only") {
  const GrayImage img = from_rows({{0, 0, 0}, {0, 0, 0}, {255, 255, 255}});
  const GradientField f = estimate_gradient(img);
  CHECK(f.gx[f.index(1, 1)] == 0.0);
  CHECK(f.gy[f.index(1, 1)] == 1020.0);
  CHECK(f.orientation[f.index(1, 1)] == kPi / 2);
}

TEST_CASE("sobel replicates border samples") {
  const GrayImage img = from_rows({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}});
  const GradientField f = estimate_gradient(img);
  // Corner (0,0) with replicate padding, worked out by hand.
  CHECK(f.gx[f.index(0, 0)] == 4.0);
  CHECK(f.gy[f.index(0, 0)] == 12.0);
}

TEST_CASE("orientation folds the full circle onto half a turn") {
  // Reversed steps flip the gradient sign but not the line orientation.
  const GrayImage right = from_rows({{0, 0, 255}, {0, 0, 255}, {0, 0, 255}});
  const GrayImage left = from_rows({{255, 0, 0}, {255, 0, 0}, {255, 0, 0}});
  const GrayImage up = from_rows({{255, 255, 255}, {0, 0, 0}, {0, 0, 0}});
  CHECK(estimate_gradient(right).orientation[4] ==
        estimate_gradient(left).orientation[4]);
  CHECK(estimate_gradient(up).orientation[4] == kPi / 2);
  for (double a : {0.1, 1.3, 2.9}) {
    CHECK_THAT(detail::fold_to_half_turn(a + kPi),
               Catch::Matchers::WithinAbs(a, 1e-12));
    CHECK_THAT(detail::fold_to_half_turn(a - kPi),
               Catch::Matchers::WithinAbs(a, 1e-12));
  }
}

TEST_CASE("gradient requires at least a 3x3 image") {
  CHECK_THROWS_AS(estimate_gradient(GrayImage(2, 5)), std::invalid_argument);
  CHECK_THROWS_AS(estimate_gradient(GrayImage(5, 2)), std::invalid_argument);
  CHECK_NOTHROW(estimate_gradient(GrayImage(3, 3)));
}

TEST_CASE("edge pixels are the top contrast fraction in scan order") {
  GradientField f;
  f.width = 2;
  f.height = 2;
  f.magnitude = {1.0, 4.0, 2.0, 3.0};
  f.orientation = {0.1, 0.2, 0.3, 0.4};
  f.gx.resize(4);
  f.gy.resize(4);

  const EdgePixelSet half = select_edge_pixels(f, 0.5);
  REQUIRE(half.size() == 3);
  CHECK(half[0].pos == PixelCoord{1, 0});
  CHECK(half[1].pos == PixelCoord{0, 1});
  CHECK(half[2].pos == PixelCoord{1, 1});
  CHECK(half[0].magnitude == 4.0);
  CHECK(half[0].orientation == 0.2);

  // The threshold is inclusive and fraction 1 keeps only the maximum.
  REQUIRE(select_edge_pixels(f, 1.0).size() == 1);
  CHECK(select_edge_pixels(f, 1.0)[0].pos == PixelCoord{1, 0});
}

TEST_CASE("a zero-gradient field has no edge pixels") {
  GradientField f;
  f.width = 2;
  f.height = 1;
  f.magnitude = {0.0, 0.0};
  f.orientation = {0.0, 0.0};
  CHECK(select_edge_pixels(f, 0.25).empty());
}

TEST_CASE("contrast fraction outside (0,1] is rejected") {
  GradientField f;
  f.width = 1;
  f.height = 1;
  f.magnitude = {1.0};
  f.orientation = {0.0};
  CHECK_THROWS_AS(select_edge_pixels(f, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(select_edge_pixels(f, -0.5), std::invalid_argument);
  CHECK_THROWS_AS(select_edge_pixels(f, 1.5), std::invalid_argument);
}

TEST_CASE("axis-aligned line rasterization") {
  const auto row = rasterize_line({2, 1}, 0.0, 5, 3);
  REQUIRE(row.size() == 5);
  for (std::uint32_t x = 0; x < 5; ++x) CHECK(row[x] == PixelCoord{x, 1});

  const auto col = rasterize_line({2, 1}, kPi / 2, 5, 3);
  REQUIRE(col.size() == 3);
  for (std::uint32_t y = 0; y < 3; ++y) CHECK(col[y] == PixelCoord{2, y});
}

TEST_CASE("diagonal line covers the pixels within half a pixel") {
  const auto diag = rasterize_line({0, 0}, kPi / 4, 4, 4);
  // Along y=x the perpendicular distance of (k, k+-1) is 1/sqrt(2) > 0.5.
  std::vector<PixelCoord> expect{{0, 0}, {1, 1}, {2, 2}, {3, 3}};
  CHECK(sorted_equal(diag, expect));
}

TEST_CASE("rasterization matches the brute-force distance oracle") {
  SplitMix64 rng(424242);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t w = 2 + rng.next_below(11);
    const std::size_t h = 2 + rng.next_below(11);
    const PixelCoord p{static_cast<std::uint32_t>(rng.next_below(w)),
                       static_cast<std::uint32_t>(rng.next_below(h))};
    const double alpha = rng.next_double() * 2.0 * kPi - kPi;
    const auto fast = rasterize_line(p, alpha, w, h);
    const auto slow = covered_pixels(p, alpha, w, h);
    REQUIRE(sorted_equal(fast, slow));
    // The same geometric line, traversed the other way.
    REQUIRE(sorted_equal(rasterize_line(p, alpha + kPi, w, h), slow));
  }
}

TEST_CASE("line origin must lie inside the raster") {
  CHECK_THROWS_AS(rasterize_line({5, 0}, 0.0, 5, 3), std::invalid_argument);
  CHECK_THROWS_AS(rasterize_line({0, 3}, 0.0, 5, 3), std::invalid_argument);
}

TEST_CASE("tangent mode links pixels along the contour") {
  // Orientation pi/2 means a vertical gradient, so the tangent line is
  // horizontal and all three pixels of the row see each other.
  EdgePixelSet edges{{{1, 2}, kPi / 2, 1.0},
                     {{4, 2}, kPi / 2, 1.0},
                     {{7, 2}, kPi / 2, 1.0}};
  const SpatialGraph g =
      build_orientation_line_network(edges, 9, 5, LineMode::tangent);
  REQUIRE(g.node_count() == 3);
  CHECK(g.edge_count() == 3);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(0, 2));
  CHECK(g.has_edge(1, 2));
  CHECK(g.find_edge(0, 1)->weight == 1.0);
  CHECK(g.position(1).x == 4.0);
  CHECK(g.position(1).y == 2.0);

  // Normal mode draws vertical lines instead: separate columns, no links.
  const SpatialGraph n =
      build_orientation_line_network(edges, 9, 5, LineMode::normal);
  CHECK(n.edge_count() == 0);
}

TEST_CASE("one covering line is enough to form an edge") {
  // The first pixel's tangent line sweeps the row and reaches the second;
  // the second's vertical line misses the first. The edge still appears.
  EdgePixelSet edges{{{0, 0}, kPi / 2, 1.0}, {{5, 0}, 0.0, 1.0}};
  const SpatialGraph g =
      build_orientation_line_network(edges, 8, 4, LineMode::tangent);
  CHECK(g.edge_count() == 1);
  CHECK(g.has_edge(0, 1));
}

TEST_CASE("line network rejects bad input") {
  CHECK_THROWS_AS(build_orientation_line_network({}, 4, 4, LineMode::tangent),
                  std::invalid_argument);
  EdgePixelSet dup{{{1, 1}, 0.0, 1.0}, {{1, 1}, 0.5, 1.0}};
  CHECK_THROWS_AS(build_orientation_line_network(dup, 4, 4, LineMode::tangent),
                  std::invalid_argument);
  EdgePixelSet outside{{{4, 1}, 0.0, 1.0}};
  CHECK_THROWS_AS(
      build_orientation_line_network(outside, 4, 4, LineMode::tangent),
      std::invalid_argument);
}

TEST_CASE("similarity weight is the reciprocal gray distance") {
  const GrayImage img = from_rows({{10, 30}, {10, 10}});
  const SpatialGraph g = build_pixel_similarity_network(img, 0.04, 1.0);
  REQUIRE(g.node_count() == 4);
  CHECK(g.edge_count() == 4);
  CHECK(g.find_edge(0, 1)->weight == 1.0 / 21.0);
  CHECK(g.find_edge(0, 2)->weight == 1.0);
  CHECK(g.find_edge(1, 3)->weight == 1.0 / 21.0);
  CHECK(g.find_edge(2, 3)->weight == 1.0);
  CHECK_FALSE(g.has_edge(0, 3));
  CHECK(g.position(3).x == 1.0);
  CHECK(g.position(3).y == 1.0);

  // A tighter threshold drops the weaker pair; the test is inclusive >=.
  CHECK(build_pixel_similarity_network(img, 0.05, 1.0).edge_count() == 2);
  const GrayImage pair = from_rows({{0, 1}});
  CHECK(build_pixel_similarity_network(pair, 0.5, 1.0).edge_count() == 1);
}

TEST_CASE("radius controls which pixel pairs are compared") {
  const GrayImage img = from_rows({{10, 30}, {10, 10}});
  // sqrt(2) <= 1.5 brings in both diagonals.
  const SpatialGraph g = build_pixel_similarity_network(img, 0.01, 1.5);
  CHECK(g.edge_count() == 6);
  CHECK(g.find_edge(0, 3)->weight == 1.0);
  CHECK(g.find_edge(1, 2)->weight == 1.0 / 21.0);
}

TEST_CASE("similarity builder validates its parameters") {
  const GrayImage img(4, 4, 0);
  CHECK_THROWS_AS(build_pixel_similarity_network(img, 0.0, 2.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_pixel_similarity_network(img, 1.1, 2.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_pixel_similarity_network(img, 0.5, 0.5),
                  std::invalid_argument);
  SimilarityOptions bad;
  bad.dispersion_weight = 1.0;
  bad.dispersion_window = 4;
  CHECK_THROWS_AS(build_pixel_similarity_network(img, 0.5, 1.0, bad),
                  std::invalid_argument);
}

TEST_CASE("gradient feature separates equal-gray pixels across a step") {
  const GrayImage img = from_rows(
      {{0, 0, 255}, {0, 0, 255}, {0, 0, 255}});
  SimilarityOptions opts;
  opts.gray_weight = 0.0;
  opts.gradient_weight = 1.0;
  const SpatialGraph g = build_pixel_similarity_network(img, 0.5, 1.0, opts);
  // Sobel magnitude per column is 0, 1020, 1020: the step kills the
  // (0,1) link but keeps (1,2) even though their gray gap is 255.
  const auto id = [](std::uint32_t x, std::uint32_t y) { return y * 3 + x; };
  CHECK_FALSE(g.has_edge(id(0, 1), id(1, 1)));
  CHECK(g.has_edge(id(1, 1), id(2, 1)));
  CHECK(g.find_edge(id(1, 1), id(2, 1))->weight == 1.0);
  CHECK(g.has_edge(id(0, 0), id(0, 1)));
}

TEST_CASE("dispersion feature separates smooth from busy neighborhoods") {
  const GrayImage img = from_rows({{0, 0, 255}});
  SimilarityOptions opts;
  opts.gray_weight = 0.0;
  opts.dispersion_weight = 1.0;
  const SpatialGraph g = build_pixel_similarity_network(img, 0.5, 1.0, opts);
  // Window stds are 0, sqrt(14450), sqrt(14450): only (1,2) survives.
  CHECK_FALSE(g.has_edge(0, 1));
  CHECK(g.has_edge(1, 2));
  CHECK(g.find_edge(1, 2)->weight == 1.0);
}
