#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "compnet/core_matrix.hpp"

namespace compnet {

/// Erdos-Renyi bipartite ensemble: every cell present with probability p.
struct ErModel {
  double p = 0.0;
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  Labels rows;
  Labels cols;
};

/// Bipartite configuration model: maximum-entropy ensemble whose expected
/// row and column degrees match the fitted matrix,
///
///     P(i, a) = x_i y_a / (1 + x_i y_a).
///
/// Full rows/columns have infinite multipliers and empty ones zero.
struct BicmModel {
  std::vector<double> x;
  std::vector<double> y;
  Dense<double> probabilities;
  double residual = 0.0;  ///< max |expected degree - observed degree|
  std::size_t iterations = 0;
  Labels rows;
  Labels cols;
};

using NullModel = std::variant<ErModel, BicmModel>;

std::string_view model_name(const NullModel& model);

ErModel fit_er(const BinaryBipartite& matrix);

struct BicmOptions {
  double tol = 1e-8;
  std::size_t max_iter = 10000;
  /// Weight kept on the previous multipliers at each update.
  double damping = 0.5;
};

/// Solves the degree equations by damped fixed-point iteration. Throws
/// ConvergenceError (carrying the residual) if `max_iter` is exhausted.
BicmModel fit_bicm(const BinaryBipartite& matrix, const BicmOptions& options = {});

/// Max absolute mismatch between expected and target degrees.
double bicm_residual(const Dense<double>& probabilities, std::span<const std::size_t> row_degrees,
                     std::span<const std::size_t> col_degrees);

/// Seed for ensemble member `index` of a run with master seed `master`.
/// splitmix64 finalizer applied to master ^ (golden-ratio * (index + 1)),
/// so each member's stream depends only on (master, index).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// One independent Bernoulli draw per cell; identical for identical seeds.
BinaryBipartite sample(const NullModel& model, std::uint64_t seed);
BinaryBipartite sample(const ErModel& model, std::uint64_t seed);
BinaryBipartite sample(const BicmModel& model, std::uint64_t seed);

}  // namespace compnet
