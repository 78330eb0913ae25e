#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "compnet/community.hpp"
#include "compnet/core_matrix.hpp"
#include "compnet/ensemble.hpp"
#include "compnet/nestedness.hpp"
#include "compnet/null_models.hpp"

namespace compnet {

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

enum class LogTransform { automatic, on, off };

/// Everything that influences a run. Embedded verbatim in every report.
struct PipelineConfig {
  std::uint64_t seed = 0;
  /// Threads for ensemble sampling. Output does not depend on it.
  std::size_t workers = 1;

  BinarizeOptions binarize;
  /// automatic: on for the science layer only.
  LogTransform log_transform = LogTransform::automatic;
  /// Years summed into each snapshot (1 = single-year).
  int window = 1;

  /// Explicit RCA histogram edges; when empty, `histogram_bins` log-spaced
  /// bins spanning the nonzero RCA range of the series.
  std::vector<double> histogram_edges;
  std::size_t histogram_bins = 30;

  FitnessComplexityOptions fitness_complexity;
  PackingMethod packing = PackingMethod::fitness_complexity;
  TemperatureOptions temperature;

  BicmOptions bicm;
  std::size_t n_samples = 1000;
  std::vector<std::string> models = {"er", "bicm"};
  std::vector<std::string> metrics = {"nodf", "temperature", "modularity"};

  Side modularity_side = Side::rows;
  ProjectionWeighting projection_weighting = ProjectionWeighting::raw;
  std::size_t modularity_restarts = 10;

  bool use_log_transform(Layer layer) const {
    return log_transform == LogTransform::on ||
           (log_transform == LogTransform::automatic && layer == Layer::science);
  }
};

/// Throws InputError on unknown keys or invalid values.
PipelineConfig load_config(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Ingestion
// ---------------------------------------------------------------------------

/// Yearly count matrices of one layer, over a shared identifier universe.
struct LayerSeries {
  Layer layer = Layer::other;
  std::vector<std::pair<int, CountMatrix>> years;  ///< strictly increasing years
};

enum class InputFormat { long_csv, wide_csv };

struct IngestResult {
  LayerSeries series;
  std::vector<std::string> warnings;
};

/// long_csv: one file with columns year,country,activity,value.
/// wide_csv: a file (or a directory of *.csv files) per year, first column
/// the country, header row the activity codes; the year is the trailing
/// integer of the file stem unless `year` is given for a single file.
IngestResult ingest(const std::filesystem::path& path, InputFormat format,
                    Layer layer = Layer::other, std::optional<int> year = std::nullopt);

IngestResult ingest_long_csv(std::istream& in, Layer layer);
/// Parses one wide table; identifiers are not yet unified with other years.
CountMatrix parse_wide_csv(std::istream& in, Layer layer, int year);

/// Unions identifiers across years (sorted), zero-filling missing cells.
LayerSeries unify(Layer layer, std::vector<CountMatrix> matrices);

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct ZScoreEntry {
  std::string metric;
  std::string model;
  std::size_t n_samples = 0;  ///< requested ensemble size
  std::uint64_t seed = 0;
  std::optional<EnsembleStats> stats;  ///< empty when the model could not be fitted
  std::string error;

  bool operator==(const ZScoreEntry&) const = default;
};

struct Histogram {
  std::vector<double> edges;
  std::vector<std::size_t> counts;

  bool operator==(const Histogram&) const = default;
};

struct YearReport {
  Layer layer = Layer::other;
  int year = 0;
  bool log_transformed = false;
  std::vector<std::string> countries;
  std::vector<std::string> activities;
  double density = 0.0;
  std::vector<std::size_t> diversification;
  std::vector<std::size_t> ubiquity;
  Histogram rca_histogram;
  std::size_t nonzero_rca = 0;
  NodfResult nodf;
  TemperatureResult temperature;
  FitnessComplexity fitness_complexity;
  Partition modularity;
  std::vector<ZScoreEntry> zscores;

  const ZScoreEntry* find(std::string_view metric, std::string_view model) const;
  bool operator==(const YearReport&) const = default;
};

/// Metrics and z-scores of an already-binarized network. The RCA fields of
/// the report are left empty.
YearReport analyze_network(const BinaryBipartite& network, const PipelineConfig& config,
                           Layer layer = Layer::other, int year = 0);

/// Transform, RCA, binarization, then analyze_network. `histogram_edges`
/// overrides the configured edges (run_series passes series-wide edges).
YearReport run_year(const CountMatrix& counts, const PipelineConfig& config,
                    const std::vector<double>* histogram_edges = nullptr);

struct YearFailure {
  int year = 0;
  std::string message;
};

struct SeriesResult {
  Layer layer = Layer::other;
  PipelineConfig config;
  std::vector<YearReport> reports;
  std::vector<YearFailure> failures;

  bool partial() const noexcept { return !failures.empty(); }
};

/// Runs every (windowed) year; a failing year is recorded and skipped.
SeriesResult run_series(const LayerSeries& series, const PipelineConfig& config);

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

enum class OutputFormat { json, csv };

/// JSON: <layer>_<year>.json per report plus series.json.
/// CSV: density.csv, rca_histogram.csv, nestedness.csv, modularity.csv.
/// Returns the written paths.
std::vector<std::filesystem::path> emit(const SeriesResult& result,
                                        const std::filesystem::path& out_dir,
                                        const std::set<OutputFormat>& formats);

/// Serialized forms, stable key order. Defined in emit.cpp.
std::string report_to_json(const YearReport& report, const PipelineConfig& config);
YearReport report_from_json(const std::string& text);
std::string config_to_json(const PipelineConfig& config);
PipelineConfig config_from_json(const std::string& text);

}  // namespace compnet
