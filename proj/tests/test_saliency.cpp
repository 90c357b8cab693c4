#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "spatnet/rng.hpp"
#include "spatnet/saliency.hpp"

using namespace spatnet;

namespace {

SpatialGraph random_connected(std::uint32_t n, std::uint64_t seed,
                              bool weighted) {
  for (int attempt = 0;; ++attempt) {
    REQUIRE(attempt < 200);
    SplitMix64 rng(seed + static_cast<std::uint64_t>(attempt) * 101);
    SpatialGraph g;
    for (std::uint32_t v = 0; v < n; ++v) g.add_node();
    for (std::uint32_t i = 0; i < n; ++i) {
      for (std::uint32_t j = i + 1; j < n; ++j) {
        if (rng.next_double() < 0.4) {
          g.add_edge(i, j, weighted ? 0.25 + rng.next_double() : 1.0);
        }
      }
    }
    bool ok = g.node_count() > 0;
    for (std::uint32_t v = 0; v < n; ++v) ok = ok && g.degree(v) > 0;
    if (ok && is_connected(g)) return g;
  }
}

double column_sum(const StochasticMatrix& w, std::size_t j) {
  double s = 0.0;
  for (const auto& e : w.columns[j]) s += e.value;
  return s;
}

}  // namespace

TEST_CASE("transition matrix splits a column by edge weight") {
  SpatialGraph g;
  for (int i = 0; i < 3; ++i) g.add_node();
  g.add_edge(0, 1, 2.0);
  g.add_edge(0, 2, 6.0);
  const StochasticMatrix w = build_stochastic_matrix(g);
  REQUIRE(w.size() == 3);
  REQUIRE(w.columns[0].size() == 2);
  CHECK(w.columns[0][0].row == 1);
  CHECK(w.columns[0][0].value == 0.25);
  CHECK(w.columns[0][1].row == 2);
  CHECK(w.columns[0][1].value == 0.75);
  CHECK(w.columns[1][0].value == 1.0);
  CHECK(w.node_mass[0] == 8.0);
  CHECK(w.node_mass[1] == 2.0);
}

TEST_CASE("saliency indices bias the transition probabilities") {
  SpatialGraph g;
  for (int i = 0; i < 3; ++i) g.add_node();
  g.add_edge(0, 1, 1.0);
  g.add_edge(1, 2, 1.0);
  const StochasticMatrix w = build_stochastic_matrix(g, {3.0, 1.0, 1.0});
  // From the middle node: toward 0 with probability 3/4.
  REQUIRE(w.columns[1].size() == 2);
  CHECK(w.columns[1][0].value == 0.75);
  CHECK(w.columns[1][1].value == 0.25);
  CHECK(w.columns[0][0].value == 1.0);
}

TEST_CASE("transition matrix rejects bad input") {
  SpatialGraph g;
  g.add_node();
  g.add_node();
  CHECK_THROWS_WITH(build_stochastic_matrix(g),
                    Catch::Matchers::ContainsSubstring("no outgoing mass"));
  g.add_edge(0, 1, 1.0);
  CHECK_THROWS_AS(build_stochastic_matrix(g, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(build_stochastic_matrix(g, {1.0, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_stochastic_matrix(g, {1.0, -2.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_stochastic_matrix(SpatialGraph{}),
                  std::invalid_argument);
}

TEST_CASE("columns sum to one") {
  const SpatialGraph g = random_connected(24, 7, true);
  const StochasticMatrix w = build_stochastic_matrix(g);
  for (std::size_t j = 0; j < w.size(); ++j) {
    CHECK(std::abs(column_sum(w, j) - 1.0) <= 1e-12);
  }
}

TEST_CASE("stationary distribution on hand-solved graphs") {
  SpatialGraph pair;
  pair.add_node();
  pair.add_node();
  pair.add_edge(0, 1, 1.0);
  const auto q2 = stationary_distribution(build_stochastic_matrix(pair));
  CHECK_THAT(q2[0], Catch::Matchers::WithinAbs(0.5, 1e-12));
  CHECK_THAT(q2[1], Catch::Matchers::WithinAbs(0.5, 1e-12));

  SpatialGraph path;
  for (int i = 0; i < 3; ++i) path.add_node();
  path.add_edge(0, 1, 1.0);
  path.add_edge(1, 2, 1.0);
  const auto q3 = stationary_distribution(build_stochastic_matrix(path));
  CHECK_THAT(q3[0], Catch::Matchers::WithinAbs(0.25, 1e-12));
  CHECK_THAT(q3[1], Catch::Matchers::WithinAbs(0.5, 1e-12));
  CHECK_THAT(q3[2], Catch::Matchers::WithinAbs(0.25, 1e-12));

  SpatialGraph star;
  for (int i = 0; i < 4; ++i) star.add_node();
  for (int i = 1; i < 4; ++i) star.add_edge(0, i, 1.0);
  const auto q4 = stationary_distribution(build_stochastic_matrix(star));
  CHECK_THAT(q4[0], Catch::Matchers::WithinAbs(0.5, 1e-10));
  for (int i = 1; i < 4; ++i) {
    CHECK_THAT(q4[i], Catch::Matchers::WithinAbs(1.0 / 6.0, 1e-10));
  }
}

TEST_CASE("unbiased occupancy is proportional to strength") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SpatialGraph g = random_connected(6 + seed % 30, 100 + seed, true);
    const auto q = stationary_distribution(build_stochastic_matrix(g), 1e-12);
    const double total = g.total_strength();
    double err = 0.0, sum = 0.0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
      err += std::abs(q[v] - g.strength(v) / total);
      sum += q[v];
    }
    CHECK(err <= 1e-8);
    CHECK(std::abs(sum - 1.0) <= 1e-12);
  }
}

TEST_CASE("biased occupancy matches its closed form") {
  // For W_ij = w_ij s_i / D_j with D_j = sum_m w_mj s_m, the stationary
  // point is q_i proportional to s_i D_i.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SpatialGraph g = random_connected(12, 4000 + seed, true);
    SplitMix64 rng(seed);
    SaliencyIndexVector s(g.node_count());
    for (auto& v : s) v = 0.25 + 3.0 * rng.next_double();
    const auto q = stationary_distribution(build_stochastic_matrix(g, s), 1e-12);
    std::vector<double> oracle(g.node_count());
    double norm = 0.0;
    for (NodeId i = 0; i < g.node_count(); ++i) {
      double d = 0.0;
      for (const auto& e : g.neighbors(i)) d += e.weight * s[e.to];
      oracle[i] = s[i] * d;
      norm += oracle[i];
    }
    double err = 0.0;
    for (NodeId i = 0; i < g.node_count(); ++i) {
      err += std::abs(q[i] - oracle[i] / norm);
    }
    CHECK(err <= 1e-8);
  }
}

TEST_CASE("scaling all saliency indices changes nothing") {
  const SpatialGraph g = random_connected(15, 51, true);
  SaliencyIndexVector s(g.node_count());
  SplitMix64 rng(3);
  for (auto& v : s) v = 0.5 + rng.next_double();
  SaliencyIndexVector s4 = s;
  for (auto& v : s4) v *= 4.0;  // power of two: bitwise identical matrices
  const auto a = stationary_distribution(build_stochastic_matrix(g, s));
  const auto b = stationary_distribution(build_stochastic_matrix(g, s4));
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("relabeling nodes permutes the occupancy") {
  SpatialGraph g;
  for (int i = 0; i < 3; ++i) g.add_node();
  g.add_edge(0, 1, 1.0);
  g.add_edge(1, 2, 2.0);
  SpatialGraph h;  // same graph with ids reversed
  for (int i = 0; i < 3; ++i) h.add_node();
  h.add_edge(2, 1, 1.0);
  h.add_edge(1, 0, 2.0);
  const auto qg = stationary_distribution(build_stochastic_matrix(g), 1e-12);
  const auto qh = stationary_distribution(build_stochastic_matrix(h), 1e-12);
  CHECK_THAT(qg[0], Catch::Matchers::WithinAbs(qh[2], 1e-12));
  CHECK_THAT(qg[1], Catch::Matchers::WithinAbs(qh[1], 1e-12));
  CHECK_THAT(qg[2], Catch::Matchers::WithinAbs(qh[0], 1e-12));
}

TEST_CASE("disconnected components are weighted by their strength share") {
  SpatialGraph g;
  for (int i = 0; i < 4; ++i) g.add_node();
  g.add_edge(0, 1, 1.0);  // component strength 2
  g.add_edge(2, 3, 3.0);  // component strength 6
  const auto q = stationary_distribution(build_stochastic_matrix(g));
  CHECK_THAT(q[0], Catch::Matchers::WithinAbs(0.125, 1e-12));
  CHECK_THAT(q[1], Catch::Matchers::WithinAbs(0.125, 1e-12));
  CHECK_THAT(q[2], Catch::Matchers::WithinAbs(0.375, 1e-12));
  CHECK_THAT(q[3], Catch::Matchers::WithinAbs(0.375, 1e-12));
}

TEST_CASE("without node mass every component counts equally") {
  StochasticMatrix w;
  w.columns = {{{0, 1.0}}, {{1, 1.0}}};  // two absorbing nodes
  const auto q = stationary_distribution(w);
  CHECK(q[0] == 0.5);
  CHECK(q[1] == 0.5);
}

TEST_CASE("iteration budget and tolerance are enforced") {
  SpatialGraph path;
  for (int i = 0; i < 3; ++i) path.add_node();
  path.add_edge(0, 1, 1.0);
  path.add_edge(1, 2, 1.0);
  const StochasticMatrix w = build_stochastic_matrix(path);
  CHECK_THROWS_AS(stationary_distribution(w, 1e-10, 1), std::runtime_error);
  CHECK_THROWS_AS(stationary_distribution(w, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(stationary_distribution(StochasticMatrix{}),
                  std::invalid_argument);
}

TEST_CASE("saliency map rescales onto 1..255 and zeroes the rest") {
  EdgePixelSet walk{{{0, 0}, 0.0, 1.0}, {{2, 1}, 0.0, 1.0}, {{1, 1}, 0.0, 1.0}};
  const GrayImage img = saliency_map(3, 2, walk, {0.2, 0.6, 0.4});
  CHECK(img.at(0, 0) == 1);
  CHECK(img.at(2, 1) == 255);
  CHECK(img.at(1, 1) == 128);  // midpoint of 1..255
  CHECK(img.at(1, 0) == 0);
  CHECK(img.at(0, 1) == 0);
}

TEST_CASE("constant occupancy renders at full brightness") {
  EdgePixelSet walk{{{0, 0}, 0.0, 1.0}, {{1, 0}, 0.0, 1.0}};
  const GrayImage img = saliency_map(2, 1, walk, {0.5, 0.5});
  CHECK(img.at(0, 0) == 255);
  CHECK(img.at(1, 0) == 255);
}

TEST_CASE("saliency map validates its inputs") {
  EdgePixelSet walk{{{5, 0}, 0.0, 1.0}};
  CHECK_THROWS_AS(saliency_map(2, 1, walk, {0.5}), std::invalid_argument);
  CHECK_THROWS_AS(saliency_map(2, 1, walk, {0.5, 0.5}), std::invalid_argument);
  CHECK(saliency_map(2, 1, {}, {}).at(0, 0) == 0);
}
