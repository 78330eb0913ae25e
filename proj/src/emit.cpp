#include <charconv>
#include <fstream>
#include <sstream>

#include "compnet/pipeline.hpp"
#include "json.hpp"

namespace compnet {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json optional_number(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json zscore_json(const ZScoreEntry& z) {
  ordered_json j;
  j["metric"] = z.metric;
  j["model"] = z.model;
  j["n_samples"] = z.n_samples;
  j["seed"] = z.seed;
  if (z.stats) {
    const auto& s = *z.stats;
    j["empirical"] = s.empirical;
    j["sample_mean"] = s.sample_mean;
    j["sample_std"] = s.sample_std;
    j["n_valid"] = s.n_samples;
    j["n_excluded"] = s.n_excluded;
    j["z_defined"] = s.z_defined();
    j["z"] = optional_number(s.z_score);
  } else {
    j["empirical"] = nullptr;
    j["sample_mean"] = nullptr;
    j["sample_std"] = nullptr;
    j["n_valid"] = 0;
    j["n_excluded"] = 0;
    j["z_defined"] = false;
    j["z"] = nullptr;
  }
  j["error"] = z.error.empty() ? ordered_json(nullptr) : ordered_json(z.error);
  return j;
}

ZScoreEntry zscore_from_json(const ordered_json& j) {
  ZScoreEntry z;
  z.metric = j.at("metric").get<std::string>();
  z.model = j.at("model").get<std::string>();
  z.n_samples = j.at("n_samples").get<std::size_t>();
  z.seed = j.at("seed").get<std::uint64_t>();
  if (!j.at("error").is_null()) z.error = j.at("error").get<std::string>();
  if (!j.at("empirical").is_null()) {
    EnsembleStats s;
    s.metric = z.metric;
    s.model = z.model;
    s.seed = z.seed;
    s.empirical = j.at("empirical").get<double>();
    s.sample_mean = j.at("sample_mean").get<double>();
    s.sample_std = j.at("sample_std").get<double>();
    s.n_samples = j.at("n_valid").get<std::size_t>();
    s.n_excluded = j.at("n_excluded").get<std::size_t>();
    if (!j.at("z").is_null()) s.z_score = j.at("z").get<double>();
    z.stats = s;
  }
  return z;
}

ordered_json report_json(const YearReport& r, const PipelineConfig& config) {
  ordered_json j;
  j["schema"] = "compnet.year_report/1";
  j["layer"] = std::string(to_string(r.layer));
  j["year"] = r.year;
  j["log_transformed"] = r.log_transformed;
  j["countries"] = r.countries;
  j["activities"] = r.activities;
  j["density"] = r.density;
  j["diversification"] = r.diversification;
  j["ubiquity"] = r.ubiquity;
  j["rca_histogram"] = {{"edges", r.rca_histogram.edges},
                        {"counts", r.rca_histogram.counts},
                        {"nonzero_entries", r.nonzero_rca}};
  j["nodf"] = {{"total", r.nodf.total},
               {"rows", r.nodf.rows},
               {"cols", r.nodf.cols},
               {"row_pairs", r.nodf.row_pairs},
               {"col_pairs", r.nodf.col_pairs}};
  const auto& t = r.temperature;
  j["temperature"] = {{"value", t.temperature},
                      {"unexpectedness", t.unexpectedness},
                      {"fill", t.fill},
                      {"isocline_exponent", t.isocline_exponent},
                      {"row_order", t.ordering.rows},
                      {"col_order", t.ordering.cols},
                      {"removed_rows", t.removed_rows},
                      {"removed_cols", t.removed_cols}};
  j["fitness_complexity"] = {{"fitness", r.fitness_complexity.fitness},
                             {"complexity", r.fitness_complexity.complexity},
                             {"iterations", r.fitness_complexity.iterations},
                             {"converged", r.fitness_complexity.converged}};
  j["modularity"] = {{"value", r.modularity.modularity},
                     {"n_communities", r.modularity.n_communities},
                     {"labels", r.modularity.labels}};
  ordered_json zs = ordered_json::array();
  for (const auto& z : r.zscores) zs.push_back(zscore_json(z));
  j["zscores"] = std::move(zs);
  j["config"] = ordered_json::parse(config_to_json(config));
  return j;
}

std::string number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

std::string z_cell(const YearReport& r, std::string_view metric, std::string_view model) {
  const auto* z = r.find(metric, model);
  if (!z || !z->stats || !z->stats->z_score) return "";
  return number(*z->stats->z_score);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

std::string report_to_json(const YearReport& report, const PipelineConfig& config) {
  return report_json(report, config).dump(2) + "\n";
}

YearReport report_from_json(const std::string& text) {
  const auto j = ordered_json::parse(text);
  YearReport r;
  r.layer = parse_layer(j.at("layer").get<std::string>());
  r.year = j.at("year").get<int>();
  r.log_transformed = j.at("log_transformed").get<bool>();
  r.countries = j.at("countries").get<std::vector<std::string>>();
  r.activities = j.at("activities").get<std::vector<std::string>>();
  r.density = j.at("density").get<double>();
  r.diversification = j.at("diversification").get<std::vector<std::size_t>>();
  r.ubiquity = j.at("ubiquity").get<std::vector<std::size_t>>();
  const auto& h = j.at("rca_histogram");
  r.rca_histogram.edges = h.at("edges").get<std::vector<double>>();
  r.rca_histogram.counts = h.at("counts").get<std::vector<std::size_t>>();
  r.nonzero_rca = h.at("nonzero_entries").get<std::size_t>();
  const auto& n = j.at("nodf");
  r.nodf.total = n.at("total").get<double>();
  r.nodf.rows = n.at("rows").get<double>();
  r.nodf.cols = n.at("cols").get<double>();
  r.nodf.row_pairs = n.at("row_pairs").get<std::size_t>();
  r.nodf.col_pairs = n.at("col_pairs").get<std::size_t>();
  const auto& t = j.at("temperature");
  r.temperature.temperature = t.at("value").get<double>();
  r.temperature.unexpectedness = t.at("unexpectedness").get<double>();
  r.temperature.fill = t.at("fill").get<double>();
  r.temperature.isocline_exponent = t.at("isocline_exponent").get<double>();
  r.temperature.ordering.rows = t.at("row_order").get<std::vector<std::size_t>>();
  r.temperature.ordering.cols = t.at("col_order").get<std::vector<std::size_t>>();
  r.temperature.removed_rows = t.at("removed_rows").get<std::vector<std::size_t>>();
  r.temperature.removed_cols = t.at("removed_cols").get<std::vector<std::size_t>>();
  const auto& fc = j.at("fitness_complexity");
  r.fitness_complexity.fitness = fc.at("fitness").get<std::vector<double>>();
  r.fitness_complexity.complexity = fc.at("complexity").get<std::vector<double>>();
  r.fitness_complexity.iterations = fc.at("iterations").get<std::size_t>();
  r.fitness_complexity.converged = fc.at("converged").get<bool>();
  const auto& m = j.at("modularity");
  r.modularity.modularity = m.at("value").get<double>();
  r.modularity.n_communities = m.at("n_communities").get<std::size_t>();
  r.modularity.labels = m.at("labels").get<std::vector<std::size_t>>();
  for (const auto& z : j.at("zscores")) r.zscores.push_back(zscore_from_json(z));
  return r;
}

std::vector<std::filesystem::path> emit(const SeriesResult& result,
                                        const std::filesystem::path& out_dir,
                                        const std::set<OutputFormat>& formats) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir))
    throw std::runtime_error("cannot create output directory " + out_dir.string());

  const std::string layer(to_string(result.layer));
  std::vector<std::filesystem::path> written;
  auto put = [&](const std::string& name, const std::string& content) {
    const auto path = out_dir / name;
    write_file(path, content);
    written.push_back(path);
  };

  if (formats.count(OutputFormat::json)) {
    for (const auto& r : result.reports)
      put(layer + "_" + std::to_string(r.year) + ".json", report_to_json(r, result.config));
    ordered_json summary;
    summary["schema"] = "compnet.series/1";
    summary["layer"] = layer;
    ordered_json years = ordered_json::array();
    for (const auto& r : result.reports) years.push_back(r.year);
    summary["years"] = std::move(years);
    ordered_json failures = ordered_json::array();
    for (const auto& f : result.failures)
      failures.push_back({{"year", f.year}, {"message", f.message}});
    summary["failures"] = std::move(failures);
    summary["partial"] = result.partial();
    summary["config"] = ordered_json::parse(config_to_json(result.config));
    put("series.json", summary.dump(2) + "\n");
  }

  if (formats.count(OutputFormat::csv)) {
    std::ostringstream dens, hist, nest, mod;
    dens << "year,density,mean_diversification,mean_ubiquity\n";
    hist << "year,bin_lo,bin_hi,count\n";
    nest << "year,nodf,nodf_rows,nodf_cols,temperature,"
            "z_nodf_er,z_nodf_bicm,z_temperature_er,z_temperature_bicm\n";
    mod << "year,modularity,n_communities,z_modularity_er,z_modularity_bicm\n";
    for (const auto& r : result.reports) {
      double div = 0.0, ubi = 0.0;
      for (auto k : r.diversification) div += static_cast<double>(k);
      for (auto k : r.ubiquity) ubi += static_cast<double>(k);
      div /= static_cast<double>(std::max<std::size_t>(r.diversification.size(), 1));
      ubi /= static_cast<double>(std::max<std::size_t>(r.ubiquity.size(), 1));
      dens << r.year << ',' << number(r.density) << ',' << number(div) << ',' << number(ubi)
           << '\n';
      for (std::size_t b = 0; b < r.rca_histogram.counts.size(); ++b)
        hist << r.year << ',' << number(r.rca_histogram.edges[b]) << ','
             << number(r.rca_histogram.edges[b + 1]) << ',' << r.rca_histogram.counts[b] << '\n';
      nest << r.year << ',' << number(r.nodf.total) << ',' << number(r.nodf.rows) << ','
           << number(r.nodf.cols) << ',' << number(r.temperature.temperature) << ','
           << z_cell(r, "nodf", "er") << ',' << z_cell(r, "nodf", "bicm") << ','
           << z_cell(r, "temperature", "er") << ',' << z_cell(r, "temperature", "bicm") << '\n';
      mod << r.year << ',' << number(r.modularity.modularity) << ','
          << r.modularity.n_communities << ',' << z_cell(r, "modularity", "er") << ','
          << z_cell(r, "modularity", "bicm") << '\n';
    }
    put("density.csv", dens.str());
    put("rca_histogram.csv", hist.str());
    put("nestedness.csv", nest.str());
    put("modularity.csv", mod.str());
  }
  return written;
}

}  // namespace compnet
