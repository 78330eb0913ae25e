#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "compnet/core_matrix.hpp"
#include "compnet/null_models.hpp"

namespace compnet {

/// A scalar network statistic. Returns nullopt where the statistic is
/// undefined for a given matrix (such samples are excluded and counted).
struct NamedMetric {
  std::string name;
  std::function<std::optional<double>(const BinaryBipartite&)> evaluate;
};

struct EnsembleStats {
  std::string metric;
  std::string model;
  double empirical = 0.0;
  double sample_mean = 0.0;
  double sample_std = 0.0;  ///< unbiased
  std::size_t n_samples = 0;   ///< samples that entered the statistics
  std::size_t n_excluded = 0;  ///< samples where the metric was undefined
  std::uint64_t seed = 0;
  /// (empirical - mean) / std; empty when std is zero or fewer than two
  /// samples are available.
  std::optional<double> z_score;

  bool z_defined() const noexcept { return z_score.has_value(); }
  bool operator==(const EnsembleStats&) const = default;
};

/// Statistics from already-computed sample values, in sample order.
EnsembleStats summarize(std::string metric, std::string model, double empirical,
                        std::span<const std::optional<double>> samples, std::uint64_t seed = 0);

struct EnsembleOptions {
  std::size_t n_samples = 1000;
  std::uint64_t seed = 0;
  /// Threads evaluating samples. Results do not depend on this.
  std::size_t workers = 1;
};

/// Draws `n_samples` matrices from `model` (member k uses
/// derive_seed(seed, k)) and evaluates every metric on each, so all metrics
/// see the same ensemble. Throws InputError if a metric is undefined on the
/// empirical matrix itself.
std::vector<EnsembleStats> zscores(const BinaryBipartite& empirical, const NullModel& model,
                                   std::span<const NamedMetric> metrics,
                                   const EnsembleOptions& options);

EnsembleStats zscore(const BinaryBipartite& empirical, const NullModel& model,
                     const NamedMetric& metric, const EnsembleOptions& options);

/// Runs task(k) for k in [0, n) on up to `workers` threads. Each index is
/// run exactly once; callers write results to slot k so the outcome does
/// not depend on scheduling.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& task);

}  // namespace compnet
