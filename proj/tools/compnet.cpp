// compnet: country x activity competitiveness networks from count data.
//
//   compnet ingest-check <input> [--input-format long|wide] [--layer L]
//   compnet year   <input> --year Y [options]
//   compnet series <input> [options]
//
// Exit codes: 0 success, 2 some years failed, 1 fatal error.

#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "compnet/pipeline.hpp"

namespace {

using namespace compnet;

struct Options {
  std::string input;
  std::string format = "long";
  std::string layer = "other";
  std::string config_path;
  std::string out = "out";
  std::vector<std::string> outputs = {"json", "csv"};
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::optional<std::size_t> samples;
  std::optional<int> year;
};

InputFormat input_format(const std::string& s) {
  if (s == "long") return InputFormat::long_csv;
  if (s == "wide") return InputFormat::wide_csv;
  throw InputError("--input-format must be long or wide");
}

std::set<OutputFormat> output_formats(const std::vector<std::string>& names) {
  std::set<OutputFormat> out;
  for (const auto& n : names) {
    if (n == "json") out.insert(OutputFormat::json);
    else if (n == "csv") out.insert(OutputFormat::csv);
    else throw InputError("--format must be json and/or csv");
  }
  return out;
}

PipelineConfig resolve_config(const Options& o) {
  PipelineConfig config = o.config_path.empty() ? PipelineConfig{} : load_config(o.config_path);
  if (o.seed) config.seed = *o.seed;
  if (o.workers) config.workers = *o.workers;
  if (o.samples) config.n_samples = *o.samples;
  return config;
}

IngestResult load(const Options& o, bool single_year_file) {
  const auto layer = parse_layer(o.layer);
  const auto format = input_format(o.format);
  auto result = ingest(o.input, format, layer,
                       single_year_file && format == InputFormat::wide_csv ? o.year : std::nullopt);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  return result;
}

int ingest_check(const Options& o) {
  const auto result = load(o, true);
  const auto& s = result.series;
  std::cout << "layer " << to_string(s.layer) << ": " << s.years.size() << " year(s)";
  if (!s.years.empty())
    std::cout << ", " << s.years.front().second.n_rows() << " countries x "
              << s.years.front().second.n_cols() << " activities";
  std::cout << '\n';
  for (const auto& [year, m] : s.years) {
    double total = 0.0;
    std::size_t nonzero = 0;
    for (double w : m.weights().values()) {
      total += w;
      nonzero += w > 0.0;
    }
    std::cout << "  " << year << ": total " << total << ", nonzero cells " << nonzero << '\n';
  }
  if (!result.warnings.empty()) std::cout << result.warnings.size() << " warning(s)\n";
  return 0;
}

int run(const Options& o, bool single_year) {
  const PipelineConfig config = resolve_config(o);
  const auto formats = output_formats(o.outputs);
  auto ingested = load(o, single_year);

  LayerSeries series = std::move(ingested.series);
  if (single_year) {
    if (!o.year) throw InputError("year needs --year");
    // Keep the window's worth of earlier years, then report only the target.
    std::erase_if(series.years, [&](const auto& entry) {
      return entry.first > *o.year || entry.first <= *o.year - config.window;
    });
    if (series.years.empty() || series.years.back().first != *o.year)
      throw InputError("year " + std::to_string(*o.year) + " not present in the input");
  }

  SeriesResult result = run_series(series, config);
  if (single_year) {
    std::erase_if(result.reports, [&](const YearReport& r) { return r.year != *o.year; });
    std::erase_if(result.failures, [&](const YearFailure& f) { return f.year != *o.year; });
  }
  for (const auto& f : result.failures)
    std::cerr << "year " << f.year << " failed: " << f.message << '\n';
  const auto written = emit(result, o.out, formats);
  std::cout << "wrote " << written.size() << " file(s) to " << o.out << '\n';

  if (result.reports.empty()) return 1;
  return result.partial() ? 2 : 0;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("input", o.input, "long CSV file, or wide CSV file/directory")->required();
  cmd->add_option("--input-format", o.format, "input layout: long or wide")
      ->check(CLI::IsMember({"long", "wide"}));
  cmd->add_option("--layer", o.layer, "science, technology, trade or other")
      ->check(CLI::IsMember({"science", "technology", "trade", "other"}));
}

void add_run(CLI::App* cmd, Options& o) {
  add_common(cmd, o);
  cmd->add_option("--config", o.config_path, "JSON configuration file");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--format", o.outputs, "output formats, comma separated (json, csv)")
      ->delimiter(',');
  cmd->add_option("--seed", o.seed, "master seed (overrides config)");
  cmd->add_option("--workers", o.workers, "sampling threads (overrides config)");
  cmd->add_option("--samples", o.samples, "ensemble size (overrides config)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Competitiveness networks: RCA, nestedness, modularity and null-model z-scores"};
  app.require_subcommand(1);
  Options o;

  auto* check = app.add_subcommand("ingest-check", "parse and validate input, print a summary");
  add_common(check, o);
  check->add_option("--year", o.year, "year of a single wide file");

  auto* year = app.add_subcommand("year", "analyze one year");
  add_run(year, o);
  year->add_option("--year", o.year, "year to analyze")->required();

  auto* series = app.add_subcommand("series", "analyze every year and write trend tables");
  add_run(series, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*check) return ingest_check(o);
    if (*year) return run(o, true);
    return run(o, false);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
