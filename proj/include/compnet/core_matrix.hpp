#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "compnet/dense.hpp"

namespace compnet {

/// Kind of activity a country x activity matrix describes.
enum class Layer { science, technology, trade, other };

std::string_view to_string(Layer layer);
Layer parse_layer(std::string_view text);

/// Shared, immutable identifier list. Matrices derived from one another
/// (and every ensemble sample) point at the same list.
using Labels = std::shared_ptr<const std::vector<std::string>>;

Labels make_labels(std::vector<std::string> ids);
/// "<prefix>0", "<prefix>1", ...
Labels index_labels(std::string_view prefix, std::size_t n);

/// Nonnegative country x activity weights for one layer and year.
class CountMatrix {
 public:
  CountMatrix(Labels rows, Labels cols, Dense<double> weights, Layer layer = Layer::other,
              int year = 0);
  CountMatrix(std::vector<std::string> rows, std::vector<std::string> cols, Dense<double> weights,
              Layer layer = Layer::other, int year = 0);
  /// Generic identifiers, for tests and synthetic data.
  explicit CountMatrix(Dense<double> weights, Layer layer = Layer::other, int year = 0);

  const std::vector<std::string>& row_ids() const noexcept { return *rows_; }
  const std::vector<std::string>& col_ids() const noexcept { return *cols_; }
  const Labels& row_labels() const noexcept { return rows_; }
  const Labels& col_labels() const noexcept { return cols_; }
  const Dense<double>& weights() const noexcept { return weights_; }
  double operator()(std::size_t i, std::size_t a) const { return weights_(i, a); }
  std::size_t n_rows() const noexcept { return weights_.rows(); }
  std::size_t n_cols() const noexcept { return weights_.cols(); }
  Layer layer() const noexcept { return layer_; }
  int year() const noexcept { return year_; }

 private:
  Labels rows_;
  Labels cols_;
  Dense<double> weights_;
  Layer layer_;
  int year_;
};

/// Balassa revealed comparative advantage values, same shape as the counts.
class RcaMatrix {
 public:
  RcaMatrix(Labels rows, Labels cols, Dense<double> values, Layer source_layer = Layer::other,
            int year = 0);
  explicit RcaMatrix(Dense<double> values);

  const std::vector<std::string>& row_ids() const noexcept { return *rows_; }
  const std::vector<std::string>& col_ids() const noexcept { return *cols_; }
  const Labels& row_labels() const noexcept { return rows_; }
  const Labels& col_labels() const noexcept { return cols_; }
  const Dense<double>& values() const noexcept { return values_; }
  double operator()(std::size_t i, std::size_t a) const { return values_(i, a); }
  std::size_t n_rows() const noexcept { return values_.rows(); }
  std::size_t n_cols() const noexcept { return values_.cols(); }
  Layer source_layer() const noexcept { return layer_; }
  int year() const noexcept { return year_; }

 private:
  Labels rows_;
  Labels cols_;
  Dense<double> values_;
  Layer layer_;
  int year_;
};

/// 0/1 competitiveness matrix with cached degree profiles.
///
/// Row degrees are diversification (activities a country is competitive
/// in); column degrees are ubiquity (countries competitive in an activity).
class BinaryBipartite {
 public:
  BinaryBipartite(Labels rows, Labels cols, Dense<std::uint8_t> cells);
  explicit BinaryBipartite(Dense<std::uint8_t> cells);

  const std::vector<std::string>& row_ids() const noexcept { return *rows_; }
  const std::vector<std::string>& col_ids() const noexcept { return *cols_; }
  const Labels& row_labels() const noexcept { return rows_; }
  const Labels& col_labels() const noexcept { return cols_; }
  const Dense<std::uint8_t>& cells() const noexcept { return cells_; }
  bool operator()(std::size_t i, std::size_t a) const { return cells_(i, a) != 0; }

  std::size_t n_rows() const noexcept { return cells_.rows(); }
  std::size_t n_cols() const noexcept { return cells_.cols(); }
  std::span<const std::size_t> row_degrees() const noexcept { return k_rows_; }
  std::span<const std::size_t> col_degrees() const noexcept { return k_cols_; }
  std::size_t links() const noexcept { return links_; }

  /// Same matrix with rows and columns reordered: row k of the result is
  /// row `row_order[k]` of this one.
  BinaryBipartite permuted(std::span<const std::size_t> row_order,
                           std::span<const std::size_t> col_order) const;

  bool operator==(const BinaryBipartite& other) const { return cells_ == other.cells_; }

 private:
  Labels rows_;
  Labels cols_;
  Dense<std::uint8_t> cells_;
  std::vector<std::size_t> k_rows_;
  std::vector<std::size_t> k_cols_;
  std::size_t links_ = 0;
};

/// w -> ln(1 + w), entrywise.
CountMatrix log_transform(const CountMatrix& counts);

/// Balassa RCA. Rows or columns with zero total get zero RCA.
RcaMatrix compute_rca(const CountMatrix& counts);

struct BinarizeOptions {
  double threshold = 1.0;
  /// Whether RCA == threshold counts as competitive.
  bool inclusive = true;
  /// Relative band around the threshold treated as equality, so that
  /// ratios which are 1 in exact arithmetic are not lost to rounding.
  double tie_tolerance = 1e-12;
};

BinaryBipartite binarize(const RcaMatrix& rca, const BinarizeOptions& options = {});

/// Fraction of present links, sum(M) / (rows * cols).
double density(const BinaryBipartite& matrix);

/// Counts of nonzero RCA entries per bin. Bins are [e_k, e_{k+1}), the last
/// one closed on the right; values outside the edges are not counted.
std::vector<std::size_t> rca_histogram(const RcaMatrix& rca, std::span<const double> bin_edges);

/// `bins` logarithmically spaced bins spanning [lo, hi].
std::vector<double> log_spaced_edges(double lo, double hi, std::size_t bins);

}  // namespace compnet
