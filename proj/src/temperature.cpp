#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "compnet/nestedness.hpp"

namespace compnet {

// Isocline

double Isocline::area(double exponent) {
  return std::exp(2.0 * std::lgamma(1.0 + 1.0 / exponent) - std::lgamma(1.0 + 2.0 / exponent));
}

Isocline Isocline::for_fill(double fill) {
  if (!(fill > 0.0 && fill < 1.0)) throw InputError("isocline needs a fill strictly inside (0, 1)");

  // area(p) increases monotonically from 0 (p -> 0) to 1 (p -> inf).
  double lo = -1.0;
  double hi = 1.0;
  while (area(std::exp(lo)) > fill && lo > -700.0) lo -= 1.0;
  while (area(std::exp(hi)) < fill && hi < 700.0) hi += 1.0;

  double mid = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (lo + hi);
    const double a = area(std::exp(mid));
    if (std::abs(a - fill) < 1e-13) break;
    (a < fill ? lo : hi) = mid;
    if (hi - lo <= std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(mid))) break;
  }
  const double p = std::exp(mid);
  if (std::abs(area(p) - fill) >= area_tolerance)
    throw ConvergenceError("isocline exponent bisection did not reach the target area",
                           std::abs(area(p) - fill), 200);
  return Isocline(p);
}

double Isocline::level(double x, double y) const {
  return std::pow(x, p_) + std::pow(y, p_) - 1.0;
}

double Isocline::diagonal_crossing(double x, double y) const {
  // Points (s, s - c) on the diagonal through (x, y); x^p + y^p grows with s.
  const double c = x - y;
  double lo = std::max(0.0, c);
  double hi = std::min(1.0, 1.0 + c);
  for (int iter = 0; iter < 100; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double g = std::pow(mid, p_) + std::pow(mid - c, p_) - 1.0;
    (g < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi) - x;
}

// Temperature

namespace {

void check_permutation(const std::vector<std::size_t>& perm, std::size_t n, const char* what) {
  if (perm.size() != n)
    throw InputError(std::string(what) + " ordering has the wrong length");
  std::vector<bool> seen(n, false);
  for (std::size_t k : perm) {
    if (k >= n || seen[k]) throw InputError(std::string(what) + " ordering is not a permutation");
    seen[k] = true;
  }
}

}  // namespace

TemperatureResult temperature(const BinaryBipartite& matrix, const Ordering& ordering,
                              const TemperatureOptions& options) {
  check_permutation(ordering.rows, matrix.n_rows(), "row");
  check_permutation(ordering.cols, matrix.n_cols(), "column");
  if (!(options.u_max > 0.0)) throw InputError("temperature calibration constant must be positive");

  TemperatureResult result;
  for (std::size_t r : ordering.rows)
    (matrix.row_degrees()[r] > 0 ? result.ordering.rows : result.removed_rows).push_back(r);
  for (std::size_t c : ordering.cols)
    (matrix.col_degrees()[c] > 0 ? result.ordering.cols : result.removed_cols).push_back(c);
  std::sort(result.removed_rows.begin(), result.removed_rows.end());
  std::sort(result.removed_cols.begin(), result.removed_cols.end());

  const std::size_t nr = result.ordering.rows.size();
  const std::size_t nc = result.ordering.cols.size();
  if (nr == 0 || nc == 0) return result;

  result.fill = static_cast<double>(matrix.links()) / static_cast<double>(nr * nc);
  if (result.fill >= 1.0) {
    result.fill = 1.0;
    return result;
  }

  const Isocline isocline = Isocline::for_fill(result.fill);
  const double p = isocline.exponent();
  result.isocline_exponent = p;

  std::vector<double> x(nc), xp(nc), y(nr), yp(nr);
  for (std::size_t a = 0; a < nc; ++a) {
    x[a] = (static_cast<double>(a) + 0.5) / static_cast<double>(nc);
    xp[a] = std::pow(x[a], p);
  }
  for (std::size_t i = 0; i < nr; ++i) {
    y[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(nr);
    yp[i] = std::pow(y[i], p);
  }

  // Cells on the same diagonal share their crossing point. The diagonal of
  // cell (i, a) is identified exactly by the integer a * nr - i * nc.
  const auto snr = static_cast<std::int64_t>(nr);
  const auto snc = static_cast<std::int64_t>(nc);
  const std::int64_t key_offset = (snr - 1) * snc;
  std::vector<double> crossing(static_cast<std::size_t>(key_offset + (snc - 1) * snr + 1),
                               std::numeric_limits<double>::quiet_NaN());

  double total = 0.0;
  for (std::size_t i = 0; i < nr; ++i) {
    const auto cells = matrix.cells().row(result.ordering.rows[i]);
    for (std::size_t a = 0; a < nc; ++a) {
      const bool present = cells[result.ordering.cols[a]] != 0;
      const double level = xp[a] + yp[i] - 1.0;
      const bool unexpected = present ? level > 0.0 : level < 0.0;
      if (!unexpected) continue;

      const auto key = static_cast<std::size_t>(static_cast<std::int64_t>(a) * snr -
                                                static_cast<std::int64_t>(i) * snc + key_offset);
      const double c = x[a] - y[i];
      // Crossing offset relative to the cell's x coordinate.
      if (std::isnan(crossing[key])) crossing[key] = isocline.diagonal_crossing(x[a], y[i]) + x[a];
      const double t = crossing[key] - x[a];
      const double relative = t / (1.0 - std::abs(c));
      total += relative * relative;
    }
  }

  result.unexpectedness = total / static_cast<double>(nr * nc);
  result.temperature = std::clamp(100.0 * result.unexpectedness / options.u_max, 0.0, 100.0);
  return result;
}

TemperatureResult temperature(const BinaryBipartite& matrix, const TemperatureOptions& options,
                              const FitnessComplexityOptions& fc_options) {
  return temperature(matrix, pack_order(matrix, PackingMethod::fitness_complexity, fc_options),
                     options);
}

}  // namespace compnet
