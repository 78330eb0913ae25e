#include <algorithm>
#include <limits>

#include "compnet/metrics.hpp"
#include "compnet/pipeline.hpp"

namespace compnet {

namespace {

// Stream tags mixed into the per-year seed.
constexpr std::uint64_t kModularitySearchStream = 0;
constexpr std::uint64_t kErStream = 1;
constexpr std::uint64_t kBicmStream = 2;

std::uint64_t year_seed(std::uint64_t master, int year) {
  return derive_seed(master, static_cast<std::uint64_t>(static_cast<std::int64_t>(year)));
}

NamedMetric make_metric(const std::string& name, const PipelineConfig& config,
                        const ModularityMetricOptions& modularity_options) {
  if (name == "nodf") return nodf_metric();
  if (name == "nodf_rows" || name == "nodf_cols") {
    const bool rows = name == "nodf_rows";
    return NamedMetric{name, [rows](const BinaryBipartite& m) -> std::optional<double> {
                         if (m.n_rows() * m.n_cols() <= 1) return std::nullopt;
                         const auto r = nodf(m);
                         return rows ? r.rows : r.cols;
                       }};
  }
  if (name == "temperature") {
    return NamedMetric{"temperature", [config](const BinaryBipartite& m) -> std::optional<double> {
                         if (m.links() == 0) return std::nullopt;
                         const auto order = pack_order(m, config.packing, config.fitness_complexity);
                         return temperature(m, order, config.temperature).temperature;
                       }};
  }
  if (name == "modularity") return modularity_metric(modularity_options);
  throw InputError("unknown metric '" + name + "'");
}

}  // namespace

const ZScoreEntry* YearReport::find(std::string_view metric, std::string_view model) const {
  for (const auto& z : zscores)
    if (z.metric == metric && z.model == model) return &z;
  return nullptr;
}

YearReport analyze_network(const BinaryBipartite& network, const PipelineConfig& config,
                           Layer layer, int year) {
  if (network.links() == 0) throw InputError("binary network has no links");

  YearReport report;
  report.layer = layer;
  report.year = year;
  report.countries = network.row_ids();
  report.activities = network.col_ids();
  report.density = density(network);
  report.diversification.assign(network.row_degrees().begin(), network.row_degrees().end());
  report.ubiquity.assign(network.col_degrees().begin(), network.col_degrees().end());
  report.nodf = nodf(network);

  report.fitness_complexity = fitness_complexity(network, config.fitness_complexity);
  const Ordering order = pack_order(network, config.packing, config.fitness_complexity);
  report.temperature = temperature(network, order, config.temperature);

  const std::uint64_t seed = year_seed(config.seed, year);
  ModularityMetricOptions modularity_options;
  modularity_options.side = config.modularity_side;
  modularity_options.weighting = config.projection_weighting;
  modularity_options.search = {config.modularity_restarts,
                               derive_seed(seed, kModularitySearchStream)};
  report.modularity = optimize_modularity(
      project(network, config.modularity_side, config.projection_weighting),
      modularity_options.search);

  std::vector<NamedMetric> metrics;
  for (const auto& name : config.metrics)
    metrics.push_back(make_metric(name, config, modularity_options));

  for (const auto& model_name : config.models) {
    const bool er = model_name == "er";
    EnsembleOptions ensemble{config.n_samples, derive_seed(seed, er ? kErStream : kBicmStream),
                             config.workers};
    std::optional<NullModel> model;
    std::string error;
    try {
      if (er) model = fit_er(network);
      else model = fit_bicm(network, config.bicm);
    } catch (const std::exception& e) {
      error = e.what();
    }

    std::vector<EnsembleStats> stats;
    if (model) stats = zscores(network, *model, metrics, ensemble);
    for (std::size_t m = 0; m < metrics.size(); ++m) {
      ZScoreEntry entry;
      entry.metric = metrics[m].name;
      entry.model = model_name;
      entry.n_samples = config.n_samples;
      entry.seed = ensemble.seed;
      if (model) entry.stats = stats[m];
      entry.error = error;
      report.zscores.push_back(std::move(entry));
    }
  }
  return report;
}

namespace {

std::vector<double> auto_edges(const std::vector<const RcaMatrix*>& matrices, std::size_t bins) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto* m : matrices)
    for (double r : m->values().values())
      if (r > 0.0) {
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
  if (!(hi > 0.0)) return {1.0, 2.0};
  if (!(hi > lo)) hi = 2.0 * lo;
  return log_spaced_edges(lo, hi, bins);
}

CountMatrix prepare(const CountMatrix& counts, const PipelineConfig& config) {
  return config.use_log_transform(counts.layer()) ? log_transform(counts) : counts;
}

}  // namespace

namespace {

YearReport run_year_unannotated(const CountMatrix& counts, const PipelineConfig& config,
                                const std::vector<double>* histogram_edges) {
  const CountMatrix weights = prepare(counts, config);
  const RcaMatrix rca = compute_rca(weights);
  const BinaryBipartite network = binarize(rca, config.binarize);

  YearReport report = analyze_network(network, config, counts.layer(), counts.year());
  report.log_transformed = config.use_log_transform(counts.layer());

  std::vector<double> edges;
  if (histogram_edges) edges = *histogram_edges;
  else if (!config.histogram_edges.empty()) edges = config.histogram_edges;
  else edges = auto_edges({&rca}, config.histogram_bins);
  report.rca_histogram.counts = rca_histogram(rca, edges);
  report.rca_histogram.edges = std::move(edges);
  report.nonzero_rca = static_cast<std::size_t>(
      std::count_if(rca.values().values().begin(), rca.values().values().end(),
                    [](double r) { return r > 0.0; }));
  return report;
}

}  // namespace

YearReport run_year(const CountMatrix& counts, const PipelineConfig& config,
                    const std::vector<double>* histogram_edges) {
  const std::string where =
      std::string(to_string(counts.layer())) + " " + std::to_string(counts.year()) + ": ";
  try {
    return run_year_unannotated(counts, config, histogram_edges);
  } catch (const InputError& e) {
    throw InputError(where + e.what());
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(where + e.what(), e.residual(), e.iterations());
  } catch (const std::exception& e) {
    throw std::runtime_error(where + e.what());
  }
}

SeriesResult run_series(const LayerSeries& series, const PipelineConfig& config) {
  if (series.years.empty()) throw InputError("series has no years");
  if (config.window < 1) throw InputError("window must be at least 1");

  SeriesResult result;
  result.layer = series.layer;
  result.config = config;

  // Windowed snapshots: year y sums the counts of years in (y - window, y].
  std::vector<CountMatrix> snapshots;
  for (const auto& [year, counts] : series.years) {
    if (config.window == 1) {
      snapshots.push_back(counts);
      continue;
    }
    Dense<double> sum(counts.n_rows(), counts.n_cols(), 0.0);
    for (const auto& [other_year, other] : series.years) {
      if (other_year > year || other_year <= year - config.window) continue;
      auto dst = sum.values();
      const auto src = other.weights().values();
      for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
    }
    snapshots.emplace_back(counts.row_labels(), counts.col_labels(), std::move(sum),
                           counts.layer(), year);
  }

  // One set of histogram edges for the whole series so years are comparable.
  std::vector<double> edges = config.histogram_edges;
  if (edges.empty()) {
    std::vector<RcaMatrix> rcas;
    for (const auto& s : snapshots) {
      try {
        rcas.push_back(compute_rca(prepare(s, config)));
      } catch (const InputError&) {
        // Reported as a failed year below.
      }
    }
    std::vector<const RcaMatrix*> ptrs;
    for (const auto& r : rcas) ptrs.push_back(&r);
    edges = auto_edges(ptrs, config.histogram_bins);
  }

  for (const auto& snapshot : snapshots) {
    try {
      result.reports.push_back(run_year(snapshot, config, &edges));
    } catch (const std::exception& e) {
      result.failures.push_back({snapshot.year(), e.what()});
    }
  }
  return result;
}

}  // namespace compnet
