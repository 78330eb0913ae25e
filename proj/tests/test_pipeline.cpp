#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "compnet/pipeline.hpp"
#include "support/synthetic.hpp"

using namespace compnet;

namespace {

const std::filesystem::path fixtures = COMPNET_FIXTURES;

PipelineConfig quick_config() {
  PipelineConfig c;
  c.seed = 2024;
  c.n_samples = 30;
  c.modularity_restarts = 2;
  return c;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("compnet_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t line_count(const std::filesystem::path& p) {
  const auto text = slurp(p);
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + COMPNET_CLI + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

LayerSeries load(const std::string& file) {
  return ingest(fixtures / file, InputFormat::long_csv, Layer::trade).series;
}

}  // namespace

TEST_CASE("config round-trips through JSON, without workers") {
  PipelineConfig c = quick_config();
  c.workers = 5;
  c.window = 3;
  c.binarize.threshold = 1.25;
  c.packing = PackingMethod::degree;
  c.modularity_side = Side::cols;
  c.metrics = {"nodf_rows", "temperature"};
  c.histogram_edges = {0.1, 1.0, 10.0};
  const auto text = config_to_json(c);
  CHECK(text.find("workers") == std::string::npos);
  const auto back = config_from_json(text);
  CHECK(config_to_json(back) == text);
  CHECK(back.workers == 1);
  CHECK(back.window == 3);
  CHECK(back.modularity_side == Side::cols);
}

TEST_CASE("config rejects unknown keys and bad values") {
  CHECK_THROWS_WITH_AS(config_from_json(R"({"sed": 1})"), doctest::Contains("unknown config key"),
                       InputError);
  CHECK_THROWS_AS(config_from_json(R"({"bicm": {"tolerance": 1}})"), InputError);
  CHECK_THROWS_AS(config_from_json(R"({"window": 0})"), InputError);
  CHECK_THROWS_AS(config_from_json(R"({"ensemble": {"models": ["sbm"]}})"), InputError);
  CHECK_THROWS_AS(config_from_json(R"({"seed": "x"})"), InputError);
  CHECK_THROWS_AS(config_from_json("{"), InputError);
  CHECK(config_from_json(R"({"log_transform": true})").log_transform == LogTransform::on);
}

TEST_CASE("uniform counts: density 1, nodf 0, modularity 0") {
  const CountMatrix w(Dense<double>(5, 8, 4.0), Layer::trade, 2000);
  const auto r = run_year(w, quick_config());
  CHECK(r.density == 1.0);
  CHECK(r.nodf.total == 0.0);
  CHECK(r.modularity.modularity == 0.0);
  CHECK(r.temperature.temperature == 0.0);
  const auto* z = r.find("nodf", "er");
  REQUIRE(z);
  REQUIRE(z->stats);
  CHECK_FALSE(z->stats->z_defined());
}

TEST_CASE("all-zero binary network is rejected with its year") {
  const CountMatrix w(Dense<double>(3, 3, 0.0), Layer::trade, 1995);
  CHECK_THROWS_WITH_AS(run_year(w, quick_config()), doctest::Contains("trade 1995"), InputError);
}

TEST_CASE("run_year is deterministic and independent of workers") {
  const auto w = testing_support::planted_blocks(2, 5, 6, 20, 40, 10, 3, 2010);
  auto c = quick_config();
  const auto a = report_to_json(run_year(w, c), c);
  const auto b = report_to_json(run_year(w, c), c);
  c.workers = 3;
  const auto d = report_to_json(run_year(w, c), c);
  CHECK(a == b);
  CHECK(a == d);
}

TEST_CASE("seeds are recorded per z-score and depend on the year") {
  const auto s = load("series_3y.csv");
  const auto c = quick_config();
  const auto r1 = run_year(s.years[0].second, c);
  const auto r2 = run_year(s.years[1].second, c);
  REQUIRE(r1.zscores.size() == 6);
  for (const auto& z : r1.zscores) {
    CHECK(z.n_samples == 30);
    CHECK(!z.metric.empty());
  }
  CHECK(r1.find("nodf", "er")->seed != r1.find("nodf", "bicm")->seed);
  CHECK(r1.find("nodf", "er")->seed == r1.find("temperature", "er")->seed);
  CHECK(r1.find("nodf", "er")->seed != r2.find("nodf", "er")->seed);
}

TEST_CASE("growing fill gives a growing density series") {
  const auto result = run_series(load("series_3y.csv"), quick_config());
  REQUIRE(result.reports.size() == 3);
  CHECK_FALSE(result.partial());
  CHECK(result.reports[0].density < result.reports[1].density);
  CHECK(result.reports[1].density < result.reports[2].density);
  for (const auto& r : result.reports) {
    std::size_t total = 0;
    for (auto n : r.rca_histogram.counts) total += n;
    CHECK(total == r.nonzero_rca);
    CHECK(r.rca_histogram.edges == result.reports[0].rca_histogram.edges);
  }
}

TEST_CASE("one corrupt year: two reports and one failure") {
  const auto result = run_series(load("series_corrupt.csv"), quick_config());
  CHECK(result.reports.size() == 2);
  REQUIRE(result.failures.size() == 1);
  CHECK(result.failures[0].year == 2002);
  CHECK(result.partial());
}

TEST_CASE("moving window sums earlier years") {
  auto c = quick_config();
  c.window = 2;
  c.models = {"er"};
  c.metrics = {"nodf"};
  const auto s = load("series_corrupt.csv");
  const auto result = run_series(s, c);
  // With a two-year window, 2002 inherits 2001's counts and succeeds.
  CHECK(result.reports.size() == 3);
  CHECK(result.failures.empty());
}

TEST_CASE("science with log off equals trade on the same counts") {
  const auto w = testing_support::planted_blocks(2, 4, 5, 10, 90, 20, 8, 2000);
  auto c = quick_config();
  c.log_transform = LogTransform::off;
  const CountMatrix sci(w.row_labels(), w.col_labels(), w.weights(), Layer::science, 2000);
  const CountMatrix trade(w.row_labels(), w.col_labels(), w.weights(), Layer::trade, 2000);
  auto a = run_year(sci, c);
  const auto b = run_year(trade, c);
  a.layer = Layer::trade;
  CHECK(a == b);

  c.log_transform = LogTransform::automatic;
  CHECK(run_year(sci, c).log_transformed);
  CHECK_FALSE(run_year(trade, c).log_transformed);
}

TEST_CASE("emit round-trips and writes one CSV row per year") {
  const auto result = run_series(load("series_corrupt.csv"), quick_config());
  const auto dir = scratch("emit");
  const auto files = emit(result, dir, {OutputFormat::json, OutputFormat::csv});
  CHECK(files.size() == 2 + 1 + 4);
  for (const auto& r : result.reports) {
    const auto text = slurp(dir / ("trade_" + std::to_string(r.year) + ".json"));
    const auto back = report_from_json(text);
    CHECK(back == r);
    CHECK(report_to_json(back, result.config) == text);
  }
  for (const char* name : {"density.csv", "nestedness.csv", "modularity.csv"})
    CHECK(line_count(dir / name) == 1 + result.reports.size());
  const auto bins = result.reports[0].rca_histogram.counts.size();
  CHECK(line_count(dir / "rca_histogram.csv") == 1 + bins * result.reports.size());
  CHECK(slurp(dir / "series.json").find("\"partial\": true") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("emit fails on an unwritable destination") {
  const auto dir = scratch("blocked");
  std::filesystem::create_directories(dir.parent_path());
  std::ofstream(dir) << "a file, not a directory";
  SeriesResult empty;
  CHECK_THROWS(emit(empty, dir / "sub", {OutputFormat::json}));
  std::filesystem::remove(dir);
}

TEST_CASE("CLI exit codes") {
  const auto dir = scratch("cli");
  const auto in = (fixtures / "series_3y.csv").string();
  const auto bad = (fixtures / "series_corrupt.csv").string();
  const std::string opts = " --layer trade --samples 20 --out \"" + dir.string() + "\"";
  CHECK(run_cli("ingest-check \"" + in + "\"") == 0);
  CHECK(run_cli("series \"" + in + "\"" + opts) == 0);
  CHECK(std::filesystem::exists(dir / "trade_2003.json"));
  CHECK(run_cli("series \"" + bad + "\"" + opts) == 2);
  CHECK(run_cli("year \"" + in + "\" --year 2002" + opts) == 0);
  CHECK(run_cli("year \"" + bad + "\" --year 2002" + opts) == 1);
  CHECK(run_cli("year \"" + in + "\" --year 1990" + opts) == 1);
  CHECK(run_cli("series \"" + (fixtures / "empty.csv").string() + "\"" + opts) == 1);
  CHECK(run_cli("series") == 1);
  CHECK(run_cli("series \"" + in + "\" --format xml" + opts) == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("CLI output is identical across worker counts") {
  const auto a = scratch("cli_w1"), b = scratch("cli_w3");
  const auto in = (fixtures / "series_3y.csv").string();
  const std::string opts = " --layer trade --samples 20 --seed 9";
  REQUIRE(run_cli("series \"" + in + "\"" + opts + " --workers 1 --out \"" + a.string() + "\"") == 0);
  REQUIRE(run_cli("series \"" + in + "\"" + opts + " --workers 3 --out \"" + b.string() + "\"") == 0);
  for (const auto& entry : std::filesystem::directory_iterator(a))
    CHECK(slurp(entry.path()) == slurp(b / entry.path().filename()));
  std::filesystem::remove_all(a);
  std::filesystem::remove_all(b);
}
