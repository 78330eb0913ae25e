#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>
#include <random>

#include "compnet/community.hpp"
#include "compnet/null_models.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace compnet;

namespace {

/// Graph from an explicit weighted adjacency matrix, via a projection-shaped struct.
Projection graph(const std::vector<std::vector<double>>& a) {
  Projection g;
  const std::size_t n = a.size();
  g.nodes = index_labels("n", n);
  g.weights = Dense<double>(n, n, 0.0);
  g.strength.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      g.weights(i, j) = a[i][j];
      g.strength[i] += a[i][j];
      g.total_weight += a[i][j] / 2.0;
    }
  return g;
}

Projection two_triangles() {
  std::vector<std::vector<double>> a(6, std::vector<double>(6, 0.0));
  auto link = [&](int i, int j) { a[i][j] = a[j][i] = 1.0; };
  link(0, 1), link(1, 2), link(0, 2), link(3, 4), link(4, 5), link(3, 5);
  return graph(a);
}

Projection random_graph(std::size_t n, double p, std::uint64_t seed, bool weighted) {
  std::mt19937_64 gen(seed);
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (testing_support::uniform01(gen) < p)
        a[i][j] = a[j][i] = weighted ? std::floor(1.0 + 4.0 * testing_support::uniform01(gen)) : 1.0;
  return graph(a);
}

}  // namespace

TEST_CASE("projection counts shared columns") {
  const auto b = testing_support::from_rows({{1, 1, 0, 1}, {1, 1, 0, 1}, {0, 0, 1, 0}});
  const auto p = project(b);
  CHECK(p.weights(0, 1) == 3.0);
  CHECK(p.weights(0, 2) == 0.0);
  CHECK(p.weights(0, 0) == 0.0);
  CHECK(p.total_weight == 3.0);
}

TEST_CASE("projection of a hand example") {
  const auto b = testing_support::from_rows({{1, 1, 0, 0}, {0, 1, 1, 0}, {1, 1, 1, 1}});
  const auto p = project(b);
  // rows 0,1 share col 1; rows 0,2 share cols 0,1; rows 1,2 share cols 1,2.
  CHECK(p.weights(0, 1) == 1.0);
  CHECK(p.weights(0, 2) == 2.0);
  CHECK(p.weights(1, 2) == 2.0);
  CHECK(p.strength == std::vector<double>{3.0, 3.0, 4.0});

  const auto cols = project(b, Side::cols);
  CHECK(cols.size() == 4);
  CHECK(cols.weights(0, 1) == 2.0);  // cols 0,1 share rows 0,2
  CHECK(cols.weights(0, 3) == 1.0);

  const auto norm = project(b, Side::rows, ProjectionWeighting::min_degree);
  CHECK(norm.weights(0, 2) == 1.0);  // 2 / min(2, 4)
  CHECK(norm.weights(0, 1) == 0.5);
}

TEST_CASE("projection is symmetric and ignores column order") {
  const auto b = testing_support::random_binary(9, 14, 0.4, 3);
  std::vector<std::size_t> rows(9), cols(14);
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(cols.begin(), cols.end(), 0);
  std::mt19937_64 gen(1);
  std::shuffle(cols.begin(), cols.end(), gen);
  const auto p = project(b), q = project(b.permuted(rows, cols));
  CHECK(p.weights == q.weights);
  for (std::size_t i = 0; i < 9; ++i)
    for (std::size_t j = 0; j < 9; ++j) CHECK(p.weights(i, j) == p.weights(j, i));
}

TEST_CASE("two triangles") {
  const auto g = two_triangles();
  const std::vector<std::size_t> planted{0, 0, 0, 1, 1, 1};
  CHECK(modularity(g, planted) == 0.5);
  const auto best = optimize_modularity(g);
  CHECK(best.modularity == 0.5);
  CHECK(best.n_communities == 2);
  CHECK(best.labels == planted);
  CHECK(testing_support::exhaustive_max_modularity(g) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("one community has zero modularity") {
  const auto g = random_graph(7, 0.5, 2, true);
  CHECK(std::abs(modularity(g, std::vector<std::size_t>(7, 4))) <= 1e-15);
}

TEST_CASE("singleton communities") {
  const auto g = random_graph(8, 0.5, 4, true);
  std::vector<std::size_t> singletons(8);
  std::iota(singletons.begin(), singletons.end(), 0);
  double want = 0.0;
  for (double k : g.strength) want -= k * k;
  want /= 4.0 * g.total_weight * g.total_weight;
  CHECK(modularity(g, singletons) == doctest::Approx(want).epsilon(1e-13));
  CHECK(want <= 0.0);
}

TEST_CASE("modularity ignores label values") {
  const auto g = random_graph(8, 0.4, 9, false);
  const std::vector<std::size_t> a{0, 0, 1, 1, 2, 2, 0, 1};
  const std::vector<std::size_t> b{7, 7, 3, 3, 11, 11, 7, 3};
  CHECK(modularity(g, a) == doctest::Approx(modularity(g, b)).epsilon(1e-15));
  CHECK(modularity(g, a) == doctest::Approx(testing_support::direct_modularity(g, a)).epsilon(1e-12));
}

TEST_CASE("optimizer matches exhaustive search on small graphs") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const std::size_t n = 3 + seed % 6;
    const auto g = random_graph(n, 0.3 + 0.01 * (seed % 40), seed, seed % 2 == 0);
    const double best = testing_support::exhaustive_max_modularity(g);
    const auto found = optimize_modularity(g, {10, seed});
    CHECK(found.modularity == doctest::Approx(best).epsilon(1e-12));
    CHECK(found.modularity == doctest::Approx(modularity(g, found.labels)).epsilon(1e-12));
  }
}

TEST_CASE("optimizer beats the trivial partitions and stays below 1") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = random_graph(30, 0.15, 100 + seed, true);
    const auto found = optimize_modularity(g, {5, seed});
    std::vector<std::size_t> singletons(30);
    std::iota(singletons.begin(), singletons.end(), 0);
    CHECK(found.modularity >= modularity(g, std::vector<std::size_t>(30, 0)) - 1e-12);
    CHECK(found.modularity >= modularity(g, singletons) - 1e-12);
    CHECK(found.modularity <= 1.0);
  }
}

TEST_CASE("complete graph stays whole") {
  std::vector<std::vector<double>> a(6, std::vector<double>(6, 1.0));
  for (std::size_t i = 0; i < 6; ++i) a[i][i] = 0.0;
  const auto found = optimize_modularity(graph(a));
  CHECK(found.n_communities == 1);
  CHECK(std::abs(found.modularity) <= 1e-15);
}

TEST_CASE("empty graph gives singletons") {
  const auto found = optimize_modularity(graph(std::vector<std::vector<double>>(4, std::vector<double>(4, 0.0))));
  CHECK(found.modularity == 0.0);
  CHECK(found.n_communities == 4);
}

TEST_CASE("planted bicliques are recovered") {
  const auto b = testing_support::from_rows({{1, 1, 1, 0, 0, 0},
                                             {1, 1, 0, 0, 0, 0},
                                             {0, 1, 1, 0, 0, 0},
                                             {1, 0, 1, 0, 0, 0},
                                             {0, 0, 0, 1, 1, 1},
                                             {0, 0, 0, 1, 1, 0},
                                             {0, 0, 0, 0, 1, 1},
                                             {0, 0, 0, 1, 0, 1}});
  const auto g = project(b);
  const auto found = optimize_modularity(g);
  CHECK(found.labels == std::vector<std::size_t>{0, 0, 0, 0, 1, 1, 1, 1});
  CHECK(found.modularity == doctest::Approx(testing_support::exhaustive_max_modularity(g)).epsilon(1e-12));
}

TEST_CASE("same seed, same partition") {
  const auto g = random_graph(40, 0.1, 5, true);
  CHECK(optimize_modularity(g, {4, 12}) == optimize_modularity(g, {4, 12}));
}

TEST_CASE("canonical labels follow first appearance") {
  std::vector<std::size_t> l{5, 5, 2, 9, 2};
  CHECK(canonicalize_labels(l) == 3);
  CHECK(l == std::vector<std::size_t>{0, 0, 1, 2, 1});
}

TEST_CASE("modularity z-score of planted blocks against ER") {
  const auto counts = testing_support::planted_blocks(2, 6, 8, 50, 100, 5, 1);
  Dense<std::uint8_t> cells(12, 16, 0);
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t a = 0; a < 16; ++a) cells(i, a) = counts(i, a) >= 50 ? 1 : 0;
  const BinaryBipartite b(std::move(cells));
  const auto s = modularity_zscore(b, fit_er(b), {100, 4, 1}, {});
  REQUIRE(s.z_defined());
  CHECK(*s.z_score > 3.0);
}

TEST_CASE("featureless random matrix against BiCM") {
  const auto b = testing_support::random_binary(12, 12, 0.5, 21);
  const auto s = modularity_zscore(b, fit_bicm(b), {200, 6, 1}, {});
  REQUIRE(s.z_defined());
  CHECK(std::abs(*s.z_score) < 3.0);
}
