#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "compnet/core_matrix.hpp"
#include "compnet/ensemble.hpp"

namespace compnet {

enum class Side { rows, cols };

enum class ProjectionWeighting {
  /// A_ij = number of shared neighbours.
  raw,
  /// A_ij = shared neighbours / min(k_i, k_j).
  min_degree,
};

/// Weighted one-mode projection of a bipartite matrix onto its rows (or
/// columns). Symmetric, zero diagonal.
struct Projection {
  Labels nodes;
  Dense<double> weights;
  std::vector<double> strength;  ///< row sums of `weights`
  double total_weight = 0.0;     ///< m = half the sum of all weights

  std::size_t size() const noexcept { return weights.rows(); }
};

Projection project(const BinaryBipartite& matrix, Side side = Side::rows,
                   ProjectionWeighting weighting = ProjectionWeighting::raw);

/// Newman modularity of a labelling,
///
///     Q = 1/(2m) sum_ij (A_ij - k_i k_j / (2m)) delta(l_i, l_j),
///
/// with m the total edge weight; 0 when m == 0. Labels are arbitrary ids.
double modularity(const Projection& graph, std::span<const std::size_t> labels);

struct Partition {
  std::vector<std::size_t> labels;  ///< community ids 0..n_communities-1, by first appearance
  std::size_t n_communities = 0;
  double modularity = 0.0;

  bool operator==(const Partition&) const = default;
};

struct ModularityOptions {
  std::size_t restarts = 10;
  std::uint64_t seed = 0;
};

/// Best of `restarts` seeded Louvain runs (local moving plus aggregation),
/// followed by `restarts` perturb-and-rerun rounds from the incumbent.
/// Every candidate is polished by vertex-mover sweeps. Ties between
/// restarts go to the lower restart index.
Partition optimize_modularity(const Projection& graph, const ModularityOptions& options = {});

/// Relabels to 0..K-1 in order of first appearance; returns K.
std::size_t canonicalize_labels(std::vector<std::size_t>& labels);

struct ModularityMetricOptions {
  Side side = Side::rows;
  ProjectionWeighting weighting = ProjectionWeighting::raw;
  ModularityOptions search;
};

/// Best modularity of the projection, as an ensemble metric.
NamedMetric modularity_metric(const ModularityMetricOptions& options = {});

EnsembleStats modularity_zscore(const BinaryBipartite& empirical, const NullModel& model,
                                const EnsembleOptions& ensemble,
                                const ModularityMetricOptions& options = {});

}  // namespace compnet
