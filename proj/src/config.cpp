#include <fstream>
#include <set>
#include <sstream>

#include "compnet/pipeline.hpp"
#include "json.hpp"

namespace compnet {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string_view to_string(LogTransform t) {
  switch (t) {
    case LogTransform::on:
      return "on";
    case LogTransform::off:
      return "off";
    default:
      return "auto";
  }
}

LogTransform parse_log_transform(const ordered_json& v) {
  if (v.is_boolean()) return v.get<bool>() ? LogTransform::on : LogTransform::off;
  const auto s = v.get<std::string>();
  if (s == "auto") return LogTransform::automatic;
  if (s == "on") return LogTransform::on;
  if (s == "off") return LogTransform::off;
  throw InputError("log_transform must be auto, on, off or a boolean");
}

std::string_view to_string(PackingMethod m) {
  return m == PackingMethod::degree ? "degree" : "fitness_complexity";
}

PackingMethod parse_packing(const std::string& s) {
  if (s == "fitness_complexity") return PackingMethod::fitness_complexity;
  if (s == "degree") return PackingMethod::degree;
  throw InputError("packing must be fitness_complexity or degree");
}

void reject_unknown(const ordered_json& obj, std::initializer_list<std::string_view> known,
                    std::string_view where) {
  if (!obj.is_object()) throw InputError(std::string(where) + " must be a JSON object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || key == k;
    if (!ok) throw InputError("unknown config key '" + std::string(where) + key + "'");
  }
}

template <class T>
void read(const ordered_json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

}  // namespace

std::string config_to_json(const PipelineConfig& c) {
  ordered_json j;
  j["seed"] = c.seed;
  j["threshold"] = c.binarize.threshold;
  j["threshold_inclusive"] = c.binarize.inclusive;
  j["tie_tolerance"] = c.binarize.tie_tolerance;
  j["log_transform"] = to_string(c.log_transform);
  j["window"] = c.window;
  j["histogram"] = {{"bins", c.histogram_bins}, {"edges", c.histogram_edges}};
  j["fitness_complexity"] = {{"tol", c.fitness_complexity.tol},
                             {"max_iter", c.fitness_complexity.max_iter}};
  j["packing"] = to_string(c.packing);
  j["temperature"] = {{"u_max", c.temperature.u_max}};
  j["bicm"] = {{"tol", c.bicm.tol}, {"max_iter", c.bicm.max_iter}, {"damping", c.bicm.damping}};
  j["ensemble"] = {{"n_samples", c.n_samples}, {"models", c.models}, {"metrics", c.metrics}};
  j["modularity"] = {
      {"side", c.modularity_side == Side::rows ? "rows" : "cols"},
      {"weighting", c.projection_weighting == ProjectionWeighting::raw ? "raw" : "min_degree"},
      {"restarts", c.modularity_restarts}};
  return j.dump(2);
}

PipelineConfig config_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("config is not valid JSON: ") + e.what());
  }

  PipelineConfig c;
  try {
    reject_unknown(j,
                   {"seed", "workers", "threshold", "threshold_inclusive", "tie_tolerance",
                    "log_transform", "window", "histogram", "fitness_complexity", "packing",
                    "temperature", "bicm", "ensemble", "modularity"},
                   "");
    read(j, "seed", c.seed);
    read(j, "workers", c.workers);
    read(j, "threshold", c.binarize.threshold);
    read(j, "threshold_inclusive", c.binarize.inclusive);
    read(j, "tie_tolerance", c.binarize.tie_tolerance);
    if (j.contains("log_transform")) c.log_transform = parse_log_transform(j.at("log_transform"));
    read(j, "window", c.window);
    if (j.contains("histogram")) {
      const auto& h = j.at("histogram");
      reject_unknown(h, {"bins", "edges"}, "histogram.");
      read(h, "bins", c.histogram_bins);
      read(h, "edges", c.histogram_edges);
    }
    if (j.contains("fitness_complexity")) {
      const auto& f = j.at("fitness_complexity");
      reject_unknown(f, {"tol", "max_iter"}, "fitness_complexity.");
      read(f, "tol", c.fitness_complexity.tol);
      read(f, "max_iter", c.fitness_complexity.max_iter);
    }
    if (j.contains("packing")) c.packing = parse_packing(j.at("packing").get<std::string>());
    if (j.contains("temperature")) {
      const auto& t = j.at("temperature");
      reject_unknown(t, {"u_max"}, "temperature.");
      read(t, "u_max", c.temperature.u_max);
    }
    if (j.contains("bicm")) {
      const auto& b = j.at("bicm");
      reject_unknown(b, {"tol", "max_iter", "damping"}, "bicm.");
      read(b, "tol", c.bicm.tol);
      read(b, "max_iter", c.bicm.max_iter);
      read(b, "damping", c.bicm.damping);
    }
    if (j.contains("ensemble")) {
      const auto& e = j.at("ensemble");
      reject_unknown(e, {"n_samples", "models", "metrics"}, "ensemble.");
      read(e, "n_samples", c.n_samples);
      read(e, "models", c.models);
      read(e, "metrics", c.metrics);
    }
    if (j.contains("modularity")) {
      const auto& m = j.at("modularity");
      reject_unknown(m, {"side", "weighting", "restarts"}, "modularity.");
      if (m.contains("side")) {
        const auto side = m.at("side").get<std::string>();
        if (side != "rows" && side != "cols") throw InputError("modularity.side must be rows or cols");
        c.modularity_side = side == "rows" ? Side::rows : Side::cols;
      }
      if (m.contains("weighting")) {
        const auto w = m.at("weighting").get<std::string>();
        if (w != "raw" && w != "min_degree")
          throw InputError("modularity.weighting must be raw or min_degree");
        c.projection_weighting =
            w == "raw" ? ProjectionWeighting::raw : ProjectionWeighting::min_degree;
      }
      read(m, "restarts", c.modularity_restarts);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("invalid config value: ") + e.what());
  }

  if (c.window < 1) throw InputError("window must be at least 1");
  if (c.workers < 1) throw InputError("workers must be at least 1");
  if (c.histogram_bins < 1) throw InputError("histogram.bins must be at least 1");
  if (c.n_samples < 2) throw InputError("ensemble.n_samples must be at least 2");
  static const std::set<std::string> known_models = {"er", "bicm"};
  static const std::set<std::string> known_metrics = {"nodf", "nodf_rows", "nodf_cols",
                                                      "temperature", "modularity"};
  for (const auto& m : c.models)
    if (!known_models.count(m)) throw InputError("unknown null model '" + m + "'");
  for (const auto& m : c.metrics)
    if (!known_metrics.count(m)) throw InputError("unknown metric '" + m + "'");
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return config_from_json(text.str());
}

}  // namespace compnet
