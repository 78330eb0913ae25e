#include "compnet/community.hpp"

#include <algorithm>
#include <unordered_map>

#include "compnet/bit_rows.hpp"

namespace compnet {

Projection project(const BinaryBipartite& matrix, Side side, ProjectionWeighting weighting) {
  const auto axis = side == Side::rows ? BitRows::Axis::rows : BitRows::Axis::cols;
  const BitRows bits(matrix, axis);
  const auto degree = side == Side::rows ? matrix.row_degrees() : matrix.col_degrees();
  const std::size_t n = bits.size();

  Projection p;
  p.nodes = side == Side::rows ? matrix.row_labels() : matrix.col_labels();
  p.weights = Dense<double>(n, n, 0.0);
  p.strength.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::size_t shared = bits.overlap(i, j);
      if (shared == 0) continue;
      double w = static_cast<double>(shared);
      if (weighting == ProjectionWeighting::min_degree)
        w /= static_cast<double>(std::min(degree[i], degree[j]));
      p.weights(i, j) = w;
      p.weights(j, i) = w;
    }
  double twice_m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (double w : p.weights.row(i)) s += w;
    p.strength[i] = s;
    twice_m += s;
  }
  p.total_weight = 0.5 * twice_m;
  return p;
}

std::size_t canonicalize_labels(std::vector<std::size_t>& labels) {
  std::unordered_map<std::size_t, std::size_t> remap;
  for (auto& l : labels) {
    auto [it, inserted] = remap.try_emplace(l, remap.size());
    l = it->second;
  }
  return remap.size();
}

double modularity(const Projection& graph, std::span<const std::size_t> labels) {
  const std::size_t n = graph.size();
  if (labels.size() != n) throw InputError("labels do not cover every node");
  if (graph.total_weight <= 0.0) return 0.0;

  std::vector<std::size_t> community(labels.begin(), labels.end());
  const std::size_t k = canonicalize_labels(community);
  std::vector<double> inside(k, 0.0), total(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    total[community[i]] += graph.strength[i];
    const auto row = graph.weights.row(i);
    for (std::size_t j = 0; j < n; ++j)
      if (community[j] == community[i]) inside[community[i]] += row[j];
  }
  const double two_m = 2.0 * graph.total_weight;
  double q = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    const double share = total[c] / two_m;
    q += inside[c] / two_m - share * share;
  }
  return q;
}

NamedMetric modularity_metric(const ModularityMetricOptions& options) {
  return NamedMetric{"modularity", [options](const BinaryBipartite& m) -> std::optional<double> {
                       return optimize_modularity(project(m, options.side, options.weighting),
                                                  options.search)
                           .modularity;
                     }};
}

EnsembleStats modularity_zscore(const BinaryBipartite& empirical, const NullModel& model,
                                const EnsembleOptions& ensemble,
                                const ModularityMetricOptions& options) {
  return zscore(empirical, model, modularity_metric(options), ensemble);
}

}  // namespace compnet
