#include <span>

#include "compnet/bit_rows.hpp"
#include "compnet/nestedness.hpp"

namespace compnet {

namespace {

// Sum over unordered pairs of overlap / smaller degree, skipping ties.
double decreasing_fill_sum(const BitRows& bits, std::span<const std::size_t> degree) {
  double sum = 0.0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    for (std::size_t j = i + 1; j < bits.size(); ++j) {
      const std::size_t ki = degree[i];
      const std::size_t kj = degree[j];
      if (ki == kj) continue;
      const std::size_t smaller = ki < kj ? ki : kj;
      if (smaller == 0) continue;
      sum += static_cast<double>(bits.overlap(i, j)) / static_cast<double>(smaller);
    }
  }
  return sum;
}

std::size_t pairs(std::size_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

}  // namespace

NodfResult nodf(const BinaryBipartite& matrix) {
  NodfResult result;
  result.row_pairs = pairs(matrix.n_rows());
  result.col_pairs = pairs(matrix.n_cols());
  const std::size_t normalization = result.row_pairs + result.col_pairs;
  if (normalization == 0) throw InputError("NODF undefined: matrix has no row or column pairs");

  const double row_sum =
      decreasing_fill_sum(BitRows(matrix, BitRows::Axis::rows), matrix.row_degrees());
  const double col_sum =
      decreasing_fill_sum(BitRows(matrix, BitRows::Axis::cols), matrix.col_degrees());

  result.total = 100.0 * (row_sum + col_sum) / static_cast<double>(normalization);
  if (result.row_pairs > 0) result.rows = 100.0 * row_sum / static_cast<double>(result.row_pairs);
  if (result.col_pairs > 0) result.cols = 100.0 * col_sum / static_cast<double>(result.col_pairs);
  return result;
}

}  // namespace compnet
