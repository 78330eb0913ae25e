#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "compnet/nestedness.hpp"
#include "support/synthetic.hpp"

using namespace compnet;

namespace {

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

TEST_CASE("all-ones matrix is a fixed point at one") {
  const auto fc = fitness_complexity(BinaryBipartite(Dense<std::uint8_t>(4, 6, 1)));
  CHECK(fc.converged);
  for (double f : fc.fitness) CHECK(f == doctest::Approx(1.0).epsilon(1e-14));
  for (double q : fc.complexity) CHECK(q == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("staircase fitness follows diversification") {
  const auto b = testing_support::staircase(4);
  const auto fc = fitness_complexity(b);
  for (std::size_t i = 0; i + 1 < 4; ++i) CHECK(fc.fitness[i] > fc.fitness[i + 1]);
  // Column 0 is present everywhere, so it is the least complex.
  for (std::size_t a = 0; a + 1 < 4; ++a) CHECK(fc.complexity[a] < fc.complexity[a + 1]);
}

TEST_CASE("an empty row gets zero fitness") {
  const auto b = testing_support::from_rows({{1, 1, 1}, {0, 0, 0}, {1, 1, 0}, {1, 0, 0}});
  const auto fc = fitness_complexity(b);
  CHECK(fc.fitness[1] == 0.0);
  CHECK(fc.fitness[0] > fc.fitness[2]);
  CHECK(fc.fitness[2] > fc.fitness[3]);
}

TEST_CASE("empty columns get zero complexity") {
  const auto b = testing_support::from_rows({{1, 0, 1}, {1, 0, 0}});
  const auto fc = fitness_complexity(b);
  CHECK(fc.complexity[1] == 0.0);
}

TEST_CASE("normalized to mean one, nonnegative") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto b = testing_support::random_binary(15, 25, 0.3, seed);
    const auto fc = fitness_complexity(b);
    CHECK(mean(fc.fitness) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mean(fc.complexity) == doctest::Approx(1.0).epsilon(1e-12));
    for (double f : fc.fitness) CHECK(f >= 0.0);
  }
}

TEST_CASE("one more step after convergence moves less than 10 tol") {
  FitnessComplexityOptions opts;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto b = testing_support::random_binary(12, 18, 0.5, 1000 + seed);
    const auto fc = fitness_complexity(b, opts);
    if (!fc.converged) continue;
    const auto next = fitness_complexity_step(b, fc);
    for (std::size_t i = 0; i < fc.fitness.size(); ++i)
      CHECK(std::abs(next.fitness[i] - fc.fitness[i]) <=
            10.0 * opts.tol * std::max(1.0, fc.fitness[i]));
    for (std::size_t a = 0; a < fc.complexity.size(); ++a)
      CHECK(std::abs(next.complexity[a] - fc.complexity[a]) <=
            10.0 * opts.tol * std::max(1.0, fc.complexity[a]));
  }
}

TEST_CASE("fitness_complexity rejects an all-zero matrix") {
  CHECK_THROWS_AS(fitness_complexity(BinaryBipartite(Dense<std::uint8_t>(3, 3, 0))), InputError);
}

TEST_CASE("packed staircase keeps identity order") {
  const auto b = testing_support::staircase(6);
  CHECK(pack_order(b, PackingMethod::degree) == Ordering::identity(6, 6));
  CHECK(pack_order(b, PackingMethod::fitness_complexity) == Ordering::identity(6, 6));
}

TEST_CASE("degree packing inverts a row shuffle") {
  const auto b = testing_support::staircase(7);
  std::vector<std::size_t> shuffle(7), cols(7);
  std::iota(shuffle.begin(), shuffle.end(), 0);
  std::iota(cols.begin(), cols.end(), 0);
  std::mt19937_64 gen(11);
  std::shuffle(shuffle.begin(), shuffle.end(), gen);
  const auto shuffled = b.permuted(shuffle, cols);
  const auto order = pack_order(shuffled, PackingMethod::degree);
  // Position k of the packing holds the shuffled row that came from row k.
  for (std::size_t k = 0; k < 7; ++k) CHECK(shuffle[order.rows[k]] == k);
  CHECK(shuffled.permuted(order.rows, order.cols) == b);
}

TEST_CASE("equal degrees keep the original order") {
  const auto b = testing_support::identity(5);
  CHECK(pack_order(b, PackingMethod::degree) == Ordering::identity(5, 5));
  CHECK(pack_order(b, PackingMethod::fitness_complexity) == Ordering::identity(5, 5));
}

TEST_CASE("empty columns are packed last") {
  const auto b = testing_support::from_rows({{0, 1, 1}, {0, 1, 0}});
  const auto order = pack_order(b);
  CHECK(order.cols.back() == 0);
  CHECK(order.rows == std::vector<std::size_t>{0, 1});
}
