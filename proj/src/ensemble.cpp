#include "compnet/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace compnet {

void parallel_for(std::size_t n, std::size_t workers,
                  const std::function<void(std::size_t)>& task) {
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    for (std::size_t k = 0; k < n; ++k) task(k);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < n; k = next++) {
          try {
            task(k);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = n;
          }
        }
      });
  }
  if (failure) std::rethrow_exception(failure);
}

EnsembleStats summarize(std::string metric, std::string model, double empirical,
                        std::span<const std::optional<double>> samples, std::uint64_t seed) {
  EnsembleStats stats;
  stats.metric = std::move(metric);
  stats.model = std::move(model);
  stats.empirical = empirical;
  stats.seed = seed;

  double sum = 0.0;
  std::optional<double> first;
  bool all_equal = true;
  for (const auto& v : samples) {
    if (!v) {
      ++stats.n_excluded;
      continue;
    }
    ++stats.n_samples;
    sum += *v;
    if (!first) first = *v;
    else if (*v != *first) all_equal = false;
  }
  if (stats.n_samples == 0) return stats;
  stats.sample_mean = sum / static_cast<double>(stats.n_samples);
  if (stats.n_samples < 2) return stats;

  // A constant ensemble has exactly zero spread; the two-pass formula could
  // otherwise leave rounding noise.
  if (all_equal) {
    stats.sample_mean = *first;
    return stats;
  }
  double squares = 0.0;
  for (const auto& v : samples)
    if (v) squares += (*v - stats.sample_mean) * (*v - stats.sample_mean);
  stats.sample_std = std::sqrt(squares / static_cast<double>(stats.n_samples - 1));
  if (stats.sample_std > 0.0) stats.z_score = (empirical - stats.sample_mean) / stats.sample_std;
  return stats;
}

std::vector<EnsembleStats> zscores(const BinaryBipartite& empirical, const NullModel& model,
                                   std::span<const NamedMetric> metrics,
                                   const EnsembleOptions& options) {
  std::vector<double> observed;
  observed.reserve(metrics.size());
  for (const auto& m : metrics) {
    const auto value = m.evaluate(empirical);
    if (!value) throw InputError("metric '" + m.name + "' is undefined on the empirical matrix");
    observed.push_back(*value);
  }

  // values[m][k]: metric m on sample k.
  std::vector<std::vector<std::optional<double>>> values(
      metrics.size(), std::vector<std::optional<double>>(options.n_samples));
  parallel_for(options.n_samples, options.workers, [&](std::size_t k) {
    const BinaryBipartite drawn = sample(model, derive_seed(options.seed, k));
    for (std::size_t m = 0; m < metrics.size(); ++m) values[m][k] = metrics[m].evaluate(drawn);
  });

  std::vector<EnsembleStats> out;
  out.reserve(metrics.size());
  const std::string name(model_name(model));
  for (std::size_t m = 0; m < metrics.size(); ++m)
    out.push_back(summarize(metrics[m].name, name, observed[m], values[m], options.seed));
  return out;
}

EnsembleStats zscore(const BinaryBipartite& empirical, const NullModel& model,
                     const NamedMetric& metric, const EnsembleOptions& options) {
  return zscores(empirical, model, std::span<const NamedMetric>(&metric, 1), options).front();
}

}  // namespace compnet
