#include "compnet/core_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

namespace compnet {

namespace {

void check_ids(const Labels& ids, std::size_t expected, const char* what) {
  if (!ids) throw InputError(std::string(what) + " identifiers missing");
  if (ids->size() != expected)
    throw InputError(std::string(what) + " identifier count " + std::to_string(ids->size()) +
                     " does not match matrix dimension " + std::to_string(expected));
  std::unordered_set<std::string_view> seen;
  for (const auto& id : *ids)
    if (!seen.insert(id).second)
      throw InputError(std::string("duplicate ") + what + " identifier '" + id + "'");
}

void check_nonnegative(const Dense<double>& m, const char* what) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t a = 0; a < m.cols(); ++a) {
      const double v = m(i, a);
      if (!std::isfinite(v) || v < 0.0)
        throw InputError(std::string(what) + " entry (" + std::to_string(i) + ", " +
                         std::to_string(a) + ") is negative or not finite");
    }
}

}  // namespace

std::string_view to_string(Layer layer) {
  switch (layer) {
    case Layer::science:
      return "science";
    case Layer::technology:
      return "technology";
    case Layer::trade:
      return "trade";
    case Layer::other:
      return "other";
  }
  return "other";
}

Layer parse_layer(std::string_view text) {
  if (text == "science") return Layer::science;
  if (text == "technology") return Layer::technology;
  if (text == "trade") return Layer::trade;
  if (text == "other") return Layer::other;
  throw InputError("unknown layer '" + std::string(text) + "'");
}

Labels make_labels(std::vector<std::string> ids) {
  return std::make_shared<const std::vector<std::string>>(std::move(ids));
}

Labels index_labels(std::string_view prefix, std::size_t n) {
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ids.push_back(std::string(prefix) + std::to_string(i));
  return make_labels(std::move(ids));
}

// CountMatrix

CountMatrix::CountMatrix(Labels rows, Labels cols, Dense<double> weights, Layer layer, int year)
    : rows_(std::move(rows)),
      cols_(std::move(cols)),
      weights_(std::move(weights)),
      layer_(layer),
      year_(year) {
  check_ids(rows_, weights_.rows(), "row");
  check_ids(cols_, weights_.cols(), "column");
  check_nonnegative(weights_, "count");
}

CountMatrix::CountMatrix(std::vector<std::string> rows, std::vector<std::string> cols,
                         Dense<double> weights, Layer layer, int year)
    : CountMatrix(make_labels(std::move(rows)), make_labels(std::move(cols)), std::move(weights),
                  layer, year) {}

CountMatrix::CountMatrix(Dense<double> weights, Layer layer, int year)
    : CountMatrix(index_labels("r", weights.rows()), index_labels("c", weights.cols()),
                  std::move(weights), layer, year) {}

// RcaMatrix

RcaMatrix::RcaMatrix(Labels rows, Labels cols, Dense<double> values, Layer source_layer, int year)
    : rows_(std::move(rows)),
      cols_(std::move(cols)),
      values_(std::move(values)),
      layer_(source_layer),
      year_(year) {
  check_ids(rows_, values_.rows(), "row");
  check_ids(cols_, values_.cols(), "column");
  check_nonnegative(values_, "RCA");
}

RcaMatrix::RcaMatrix(Dense<double> values)
    : RcaMatrix(index_labels("r", values.rows()), index_labels("c", values.cols()),
                std::move(values)) {}

// BinaryBipartite

BinaryBipartite::BinaryBipartite(Labels rows, Labels cols, Dense<std::uint8_t> cells)
    : rows_(std::move(rows)), cols_(std::move(cols)), cells_(std::move(cells)) {
  if (!rows_ || rows_->size() != cells_.rows() || !cols_ || cols_->size() != cells_.cols())
    throw InputError("identifier lists do not match binary matrix dimensions");
  k_rows_.assign(cells_.rows(), 0);
  k_cols_.assign(cells_.cols(), 0);
  for (std::size_t i = 0; i < cells_.rows(); ++i) {
    const auto row = cells_.row(i);
    for (std::size_t a = 0; a < row.size(); ++a) {
      if (row[a] > 1) throw InputError("binary matrix entry is neither 0 nor 1");
      k_rows_[i] += row[a];
      k_cols_[a] += row[a];
    }
    links_ += k_rows_[i];
  }
}

BinaryBipartite::BinaryBipartite(Dense<std::uint8_t> cells)
    : BinaryBipartite(index_labels("r", cells.rows()), index_labels("c", cells.cols()),
                      std::move(cells)) {}

BinaryBipartite BinaryBipartite::permuted(std::span<const std::size_t> row_order,
                                          std::span<const std::size_t> col_order) const {
  if (row_order.size() != n_rows() || col_order.size() != n_cols())
    throw InputError("permutation size does not match matrix");
  Dense<std::uint8_t> out(n_rows(), n_cols());
  std::vector<std::string> row_ids(n_rows());
  std::vector<std::string> col_ids(n_cols());
  for (std::size_t a = 0; a < n_cols(); ++a) col_ids[a] = (*cols_)[col_order[a]];
  for (std::size_t i = 0; i < n_rows(); ++i) {
    row_ids[i] = (*rows_)[row_order[i]];
    const auto src = cells_.row(row_order[i]);
    auto dst = out.row(i);
    for (std::size_t a = 0; a < n_cols(); ++a) dst[a] = src[col_order[a]];
  }
  return BinaryBipartite(make_labels(std::move(row_ids)), make_labels(std::move(col_ids)),
                         std::move(out));
}

// Operations

CountMatrix log_transform(const CountMatrix& counts) {
  Dense<double> out = counts.weights();
  for (double& w : out.values()) w = std::log1p(w);
  return CountMatrix(counts.row_labels(), counts.col_labels(), std::move(out), counts.layer(),
                     counts.year());
}

RcaMatrix compute_rca(const CountMatrix& counts) {
  const auto& w = counts.weights();
  std::vector<double> row_sum(w.rows(), 0.0);
  std::vector<double> col_sum(w.cols(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < w.rows(); ++i)
    for (std::size_t a = 0; a < w.cols(); ++a) {
      row_sum[i] += w(i, a);
      col_sum[a] += w(i, a);
    }
  for (double s : row_sum) total += s;
  if (!(total > 0.0)) throw InputError("RCA undefined: count matrix has zero total");

  // (w / row) / (col / total) written as w * total / (row * col) so that
  // uniform integer counts give exactly 1.
  Dense<double> rca(w.rows(), w.cols(), 0.0);
  for (std::size_t i = 0; i < w.rows(); ++i) {
    if (row_sum[i] == 0.0) continue;
    for (std::size_t a = 0; a < w.cols(); ++a) {
      if (w(i, a) == 0.0) continue;
      rca(i, a) = w(i, a) * total / (row_sum[i] * col_sum[a]);
    }
  }
  return RcaMatrix(counts.row_labels(), counts.col_labels(), std::move(rca), counts.layer(),
                   counts.year());
}

BinaryBipartite binarize(const RcaMatrix& rca, const BinarizeOptions& options) {
  if (!(options.threshold > 0.0) || !std::isfinite(options.threshold))
    throw InputError("binarization threshold must be positive");
  if (options.tie_tolerance < 0.0) throw InputError("tie tolerance must be nonnegative");
  const double band = options.threshold * options.tie_tolerance;
  Dense<std::uint8_t> cells(rca.n_rows(), rca.n_cols(), 0);
  for (std::size_t i = 0; i < rca.n_rows(); ++i)
    for (std::size_t a = 0; a < rca.n_cols(); ++a) {
      const double r = rca(i, a);
      const bool active =
          options.inclusive ? r >= options.threshold - band : r > options.threshold + band;
      cells(i, a) = active ? 1 : 0;
    }
  return BinaryBipartite(rca.row_labels(), rca.col_labels(), std::move(cells));
}

double density(const BinaryBipartite& matrix) {
  const std::size_t cells = matrix.n_rows() * matrix.n_cols();
  if (cells == 0) throw InputError("density of an empty matrix is undefined");
  return static_cast<double>(matrix.links()) / static_cast<double>(cells);
}

std::vector<std::size_t> rca_histogram(const RcaMatrix& rca, std::span<const double> bin_edges) {
  if (bin_edges.size() < 2) throw InputError("histogram needs at least two bin edges");
  for (std::size_t k = 1; k < bin_edges.size(); ++k)
    if (!(bin_edges[k] > bin_edges[k - 1]))
      throw InputError("histogram bin edges must be strictly increasing");

  std::vector<std::size_t> counts(bin_edges.size() - 1, 0);
  const double lo = bin_edges.front();
  const double hi = bin_edges.back();
  for (double r : rca.values().values()) {
    if (r == 0.0 || r < lo || r > hi) continue;
    auto it = std::upper_bound(bin_edges.begin(), bin_edges.end(), r);
    std::size_t bin = static_cast<std::size_t>(it - bin_edges.begin());
    // upper_bound lands one past the bin; r == hi belongs to the last bin.
    bin = bin == bin_edges.size() ? counts.size() - 1 : bin - 1;
    ++counts[bin];
  }
  return counts;
}

std::vector<double> log_spaced_edges(double lo, double hi, std::size_t bins) {
  if (!(lo > 0.0) || !(hi > lo) || bins == 0)
    throw InputError("log-spaced edges need 0 < lo < hi and at least one bin");
  std::vector<double> edges(bins + 1);
  const double step = (std::log(hi) - std::log(lo)) / static_cast<double>(bins);
  for (std::size_t k = 0; k <= bins; ++k)
    edges[k] = std::exp(std::log(lo) + step * static_cast<double>(k));
  edges.front() = lo;
  edges.back() = hi;
  return edges;
}

}  // namespace compnet
