#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "compnet/core_matrix.hpp"

namespace compnet {

// ---------------------------------------------------------------------------
// NODF (overlap and decreasing fill)
// ---------------------------------------------------------------------------

struct NodfResult {
  double total = 0.0;  ///< [0, 100]
  double rows = 0.0;   ///< [0, 100]; 0 when there are no row pairs
  double cols = 0.0;   ///< [0, 100]; 0 when there are no column pairs
  std::size_t row_pairs = 0;
  std::size_t col_pairs = 0;

  bool operator==(const NodfResult&) const = default;
};

/// Pairs with equal degree (or a zero-degree member) contribute nothing;
/// otherwise a pair adds overlap / smaller degree. Normalized by the number
/// of unordered row pairs plus column pairs. Throws InputError for a matrix
/// with no pairs at all (1 x 1 or empty).
NodfResult nodf(const BinaryBipartite& matrix);

// ---------------------------------------------------------------------------
// Fitness-Complexity ranking
// ---------------------------------------------------------------------------

struct FitnessComplexityOptions {
  double tol = 1e-10;
  std::size_t max_iter = 1000;
};

struct FitnessComplexity {
  std::vector<double> fitness;     ///< per row, mean 1; 0 for empty rows
  std::vector<double> complexity;  ///< per column, mean 1; 0 for empty columns
  std::size_t iterations = 0;
  bool converged = false;

  bool operator==(const FitnessComplexity&) const = default;
};

/// Nonlinear fitness/complexity map started from all ones. Both vectors are
/// renormalized to mean 1 after every update; stops once the largest
/// relative change falls below `tol`.
FitnessComplexity fitness_complexity(const BinaryBipartite& matrix,
                                     const FitnessComplexityOptions& options = {});

/// One step of the map applied to given vectors (normalized afterwards).
/// Exposed for fixed-point checks.
FitnessComplexity fitness_complexity_step(const BinaryBipartite& matrix,
                                          const FitnessComplexity& current);

// ---------------------------------------------------------------------------
// Packing
// ---------------------------------------------------------------------------

enum class PackingMethod { fitness_complexity, degree };

/// rows[k] / cols[k] is the original index placed at position k.
struct Ordering {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;

  static Ordering identity(std::size_t n_rows, std::size_t n_cols);
  bool operator==(const Ordering&) const = default;
};

/// Rows by descending fitness (or degree), columns by ascending complexity
/// (or descending ubiquity). Stable: ties keep the original order. Empty
/// columns always go last.
Ordering pack_order(const BinaryBipartite& matrix,
                    PackingMethod method = PackingMethod::fitness_complexity,
                    const FitnessComplexityOptions& fc_options = {});

// ---------------------------------------------------------------------------
// Temperature
// ---------------------------------------------------------------------------

/// Boundary of perfect nestedness at a given fill, drawn on the unit square
/// with x running along the packed columns and y down the packed rows:
///
///     x^p + y^p = 1
///
/// The region below the curve (towards the filled corner at the origin)
/// has area Gamma(1 + 1/p)^2 / Gamma(1 + 2/p); p is chosen so that this
/// area equals the fill.
class Isocline {
 public:
  static constexpr double area_tolerance = 1e-9;

  /// fill in (0, 1).
  static Isocline for_fill(double fill);

  double exponent() const noexcept { return p_; }
  static double area(double exponent);

  /// x^p + y^p - 1: negative on the nested side.
  double level(double x, double y) const;

  /// Signed offset t such that (x + t, y + t) lies on the curve.
  double diagonal_crossing(double x, double y) const;

 private:
  explicit Isocline(double p) : p_(p) {}
  double p_;
};

struct TemperatureOptions {
  /// Value of U that maps to T = 100.
  double u_max = 0.04145;
};

struct TemperatureResult {
  double temperature = 0.0;    ///< [0, 100]
  double unexpectedness = 0.0; ///< U, mean squared normalized distance
  double fill = 0.0;           ///< fill of the reduced matrix
  double isocline_exponent = 0.0;
  Ordering ordering;           ///< original indices of the reduced packed matrix
  std::vector<std::size_t> removed_rows;  ///< zero-degree rows dropped first
  std::vector<std::size_t> removed_cols;

  bool operator==(const TemperatureResult&) const = default;
};

/// Temperature of the matrix packed by `ordering`. Zero-degree rows and
/// columns are removed before the fill and the isocline are computed. An
/// empty or completely filled reduced matrix has temperature 0.
TemperatureResult temperature(const BinaryBipartite& matrix, const Ordering& ordering,
                              const TemperatureOptions& options = {});

/// Temperature with the default Fitness-Complexity packing.
TemperatureResult temperature(const BinaryBipartite& matrix,
                              const TemperatureOptions& options = {},
                              const FitnessComplexityOptions& fc_options = {});

}  // namespace compnet
