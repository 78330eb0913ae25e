#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "compnet/core_matrix.hpp"

namespace compnet {

/// Rows (or columns) of a binary matrix packed into 64-bit words, for fast
/// pairwise overlap counts.
class BitRows {
 public:
  enum class Axis { rows, cols };

  BitRows(const BinaryBipartite& matrix, Axis axis)
      : count_(axis == Axis::rows ? matrix.n_rows() : matrix.n_cols()),
        length_(axis == Axis::rows ? matrix.n_cols() : matrix.n_rows()),
        words_per_row_((length_ + 63) / 64),
        bits_(count_ * words_per_row_, 0) {
    for (std::size_t i = 0; i < matrix.n_rows(); ++i)
      for (std::size_t a = 0; a < matrix.n_cols(); ++a) {
        if (!matrix(i, a)) continue;
        const std::size_t r = axis == Axis::rows ? i : a;
        const std::size_t c = axis == Axis::rows ? a : i;
        bits_[r * words_per_row_ + c / 64] |= std::uint64_t{1} << (c % 64);
      }
  }

  std::size_t size() const noexcept { return count_; }

  /// Number of positions set in both r and s.
  std::size_t overlap(std::size_t r, std::size_t s) const noexcept {
    const std::uint64_t* x = bits_.data() + r * words_per_row_;
    const std::uint64_t* y = bits_.data() + s * words_per_row_;
    std::size_t n = 0;
    for (std::size_t w = 0; w < words_per_row_; ++w) n += std::popcount(x[w] & y[w]);
    return n;
  }

 private:
  std::size_t count_;
  std::size_t length_;
  std::size_t words_per_row_;
  std::vector<std::uint64_t> bits_;
};

}  // namespace compnet
