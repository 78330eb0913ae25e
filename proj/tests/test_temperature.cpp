#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>

#include "compnet/nestedness.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace compnet;

TEST_CASE("isocline area matches the requested fill") {
  for (double fill : {0.05, 0.2, 0.5, 0.625, 0.9, 0.99}) {
    const auto iso = Isocline::for_fill(fill);
    CHECK(std::abs(Isocline::area(iso.exponent()) - fill) <= 1e-9);
    CHECK(std::abs(testing_support::quadrature_area(iso.exponent()) - fill) <= 1e-7);
  }
  CHECK(Isocline::for_fill(0.5).exponent() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(Isocline::for_fill(0.0), InputError);
  CHECK_THROWS_AS(Isocline::for_fill(1.0), InputError);
}

TEST_CASE("diagonal crossing lands on the curve") {
  const auto iso = Isocline::for_fill(0.3);
  for (double x : {0.1, 0.4, 0.9})
    for (double y : {0.05, 0.5, 0.95}) {
      const double t = iso.diagonal_crossing(x, y);
      CHECK(std::abs(iso.level(x + t, y + t)) <= 1e-10);
    }
}

TEST_CASE("staircases have zero temperature") {
  for (std::size_t n = 2; n <= 40; ++n) {
    const auto b = testing_support::staircase(n);
    CHECK(temperature(b, Ordering::identity(n, n)).temperature == 0.0);
    CHECK(temperature(b).temperature < 1.0);
  }
}

TEST_CASE("full and empty matrices have zero temperature") {
  CHECK(temperature(BinaryBipartite(Dense<std::uint8_t>(5, 7, 1))).temperature == 0.0);
  const BinaryBipartite empty(Dense<std::uint8_t>(5, 7, 0));
  const auto r = temperature(empty, Ordering::identity(5, 7));
  CHECK(r.temperature == 0.0);
  CHECK(r.removed_rows.size() == 5);
}

TEST_CASE("staircase with one cell moved to the far corner") {
  // 4x4 staircase; the 1 at (0, 3) moved to (3, 3).
  const std::vector<std::vector<int>> m{{1, 1, 1, 0}, {1, 1, 1, 0}, {1, 1, 0, 0}, {1, 0, 0, 1}};
  const auto r = temperature(testing_support::from_rows(m), Ordering::identity(4, 4));

  // Frozen from an independent scipy evaluation (quad + brentq).
  CHECK(r.isocline_exponent == doctest::Approx(1.3020013598458984).epsilon(1e-9));
  CHECK(r.unexpectedness == doctest::Approx(0.007351324785708272).epsilon(1e-9));
  CHECK(r.temperature == doctest::Approx(17.735403584338414).epsilon(1e-9));
  CHECK(r.fill == 0.625);

  // Both altered cells and nothing else are unexpected.
  const double p = r.isocline_exponent;
  auto u = [p](double x, double y) {
    const auto iso = Isocline::for_fill(Isocline::area(p));
    const double t = iso.diagonal_crossing(x, y);
    return std::pow(t / (1.0 - std::abs(x - y)), 2);
  };
  CHECK(r.unexpectedness ==
        doctest::Approx((u(0.875, 0.125) + u(0.875, 0.875)) / 16.0).epsilon(1e-9));

  const auto oracle = testing_support::oracle_temperature(m);
  CHECK(r.unexpectedness == doctest::Approx(oracle.unexpectedness).epsilon(1e-6));
}

TEST_CASE("random matrices agree with the quadrature oracle") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto b = testing_support::random_binary(9, 13, 0.35 + 0.03 * seed, 500 + seed);
    if (b.links() == 0) continue;
    const auto r = temperature(b);
    const auto packed = b.permuted(r.ordering.rows, r.ordering.cols);
    if (!r.removed_rows.empty() || !r.removed_cols.empty()) continue;
    const auto oracle = testing_support::oracle_temperature(testing_support::to_rows(packed));
    CHECK(r.temperature == doctest::Approx(oracle.temperature).epsilon(1e-6));
  }
}

TEST_CASE("zero rows and columns are removed first") {
  const auto b = testing_support::from_rows({{1, 0, 1, 0}, {0, 0, 0, 0}, {1, 0, 0, 0}});
  const auto r = temperature(b, Ordering::identity(3, 4));
  CHECK(r.removed_rows == std::vector<std::size_t>{1});
  CHECK(r.removed_cols == std::vector<std::size_t>{1, 3});
  CHECK(r.fill == doctest::Approx(0.75));
  CHECK(r.ordering.rows == std::vector<std::size_t>{0, 2});
}

TEST_CASE("orderings giving the same packed matrix give the same temperature") {
  // Rows 0 and 1 are identical, so swapping them yields the same packed matrix.
  const auto b = testing_support::from_rows({{1, 1, 0, 1}, {1, 1, 0, 1}, {1, 0, 1, 0}});
  Ordering a = Ordering::identity(3, 4);
  Ordering c = a;
  std::swap(c.rows[0], c.rows[1]);
  CHECK(temperature(b, a).temperature == temperature(b, c).temperature);
}

TEST_CASE("nested matrices are cooler than random ones") {
  const auto nested = testing_support::nested_with_noise(30, 40, 0.4, 0.05, 3);
  const auto random = testing_support::random_binary(30, 40, 0.4, 3);
  CHECK(temperature(nested).temperature < temperature(random).temperature);
}

TEST_CASE("temperature stays in range and rejects bad orderings") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto b = testing_support::random_binary(10, 10, 0.5, seed);
    const auto r = temperature(b, Ordering::identity(10, 10));
    CHECK(r.temperature >= 0.0);
    CHECK(r.temperature <= 100.0);
  }
  const auto b = testing_support::staircase(3);
  Ordering bad = Ordering::identity(3, 3);
  bad.rows[0] = 1;
  CHECK_THROWS_AS(temperature(b, bad), InputError);
}
