#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "compnet/pipeline.hpp"

namespace compnet {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::string where(std::size_t line) { return "line " + std::to_string(line) + ": "; }

// Splits one CSV record. Double-quoted fields may contain commas and "".
std::vector<std::string> split_record(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char ch = line[k];
    if (quoted) {
      if (ch == '"') {
        if (k + 1 < line.size() && line[k + 1] == '"') {
          field += '"';
          ++k;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(trim(field));
      field.clear();
    } else {
      field += ch;
    }
  }
  if (quoted) throw InputError(where(line_no) + "unterminated quoted field");
  fields.push_back(trim(field));
  return fields;
}

double parse_value(const std::string& text, std::size_t line_no) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end)
    throw InputError(where(line_no) + "value '" + text + "' is not a decimal number");
  if (!std::isfinite(v)) throw InputError(where(line_no) + "value is not finite");
  if (v < 0.0) throw InputError(where(line_no) + "negative value " + text + " rejected");
  return v;
}

int parse_year(const std::string& text, std::size_t line_no) {
  int y = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, y);
  if (text.empty() || ec != std::errc() || ptr != end)
    throw InputError(where(line_no) + "year '" + text + "' is not an integer");
  return y;
}

// Reads lines, skipping blank ones; strips a UTF-8 byte-order mark.
bool next_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!trim(line).empty()) return true;
  }
  return false;
}

}  // namespace

LayerSeries unify(Layer layer, std::vector<CountMatrix> matrices) {
  std::set<std::string> countries, activities;
  std::set<int> years;
  for (const auto& m : matrices) {
    if (!years.insert(m.year()).second)
      throw InputError("year " + std::to_string(m.year()) + " appears more than once");
    countries.insert(m.row_ids().begin(), m.row_ids().end());
    activities.insert(m.col_ids().begin(), m.col_ids().end());
  }
  const std::vector<std::string> row_vec(countries.begin(), countries.end());
  const std::vector<std::string> col_vec(activities.begin(), activities.end());
  const Labels rows = make_labels(row_vec);
  const Labels cols = make_labels(col_vec);
  std::map<std::string_view, std::size_t> row_index, col_index;
  for (std::size_t i = 0; i < rows->size(); ++i) row_index[(*rows)[i]] = i;
  for (std::size_t a = 0; a < cols->size(); ++a) col_index[(*cols)[a]] = a;

  std::sort(matrices.begin(), matrices.end(),
            [](const CountMatrix& a, const CountMatrix& b) { return a.year() < b.year(); });
  LayerSeries series;
  series.layer = layer;
  for (const auto& m : matrices) {
    Dense<double> w(rows->size(), cols->size(), 0.0);
    for (std::size_t i = 0; i < m.n_rows(); ++i)
      for (std::size_t a = 0; a < m.n_cols(); ++a)
        w(row_index.at(m.row_ids()[i]), col_index.at(m.col_ids()[a])) = m(i, a);
    series.years.emplace_back(m.year(), CountMatrix(rows, cols, std::move(w), layer, m.year()));
  }
  return series;
}

IngestResult ingest_long_csv(std::istream& in, Layer layer) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_line(in, line, line_no)) throw InputError("input is empty");
  const auto header = split_record(line, line_no);
  if (header != std::vector<std::string>{"year", "country", "activity", "value"})
    throw InputError(where(line_no) + "header must be exactly year,country,activity,value");

  IngestResult result;
  // year -> (country, activity) -> value
  std::map<int, std::map<std::pair<std::string, std::string>, double>> cells;
  std::size_t records = 0;
  while (next_line(in, line, line_no)) {
    const auto fields = split_record(line, line_no);
    if (fields.size() != 4)
      throw InputError(where(line_no) + "expected 4 fields, found " +
                       std::to_string(fields.size()));
    if (fields[1].empty() || fields[2].empty())
      throw InputError(where(line_no) + "country and activity must be non-empty");
    const int year = parse_year(fields[0], line_no);
    const double value = parse_value(fields[3], line_no);
    auto [it, inserted] = cells[year].try_emplace({fields[1], fields[2]}, value);
    if (!inserted) {
      it->second += value;
      result.warnings.push_back(where(line_no) + "duplicate (" + fields[0] + ", " + fields[1] +
                                ", " + fields[2] + ") summed");
    }
    ++records;
  }
  if (records == 0) throw InputError("input has a header but no records");

  std::vector<CountMatrix> matrices;
  for (const auto& [year, entries] : cells) {
    std::set<std::string> cs, as;
    for (const auto& [key, _] : entries) {
      cs.insert(key.first);
      as.insert(key.second);
    }
    std::vector<std::string> rows(cs.begin(), cs.end()), cols(as.begin(), as.end());
    std::map<std::string_view, std::size_t> ri, ci;
    for (std::size_t i = 0; i < rows.size(); ++i) ri[rows[i]] = i;
    for (std::size_t a = 0; a < cols.size(); ++a) ci[cols[a]] = a;
    Dense<double> w(rows.size(), cols.size(), 0.0);
    for (const auto& [key, v] : entries) w(ri.at(key.first), ci.at(key.second)) = v;
    matrices.emplace_back(std::move(rows), std::move(cols), std::move(w), layer, year);
  }
  result.series = unify(layer, std::move(matrices));
  return result;
}

CountMatrix parse_wide_csv(std::istream& in, Layer layer, int year) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_line(in, line, line_no)) throw InputError("input is empty");
  const auto header = split_record(line, line_no);
  if (header.size() < 2) throw InputError(where(line_no) + "header needs at least one activity");
  std::vector<std::string> cols(header.begin() + 1, header.end());

  std::vector<std::string> rows;
  std::vector<double> values;
  while (next_line(in, line, line_no)) {
    const auto fields = split_record(line, line_no);
    if (fields.size() != header.size())
      throw InputError(where(line_no) + "expected " + std::to_string(header.size()) +
                       " fields, found " + std::to_string(fields.size()));
    if (fields[0].empty()) throw InputError(where(line_no) + "country must be non-empty");
    if (std::find(rows.begin(), rows.end(), fields[0]) != rows.end())
      throw InputError(where(line_no) + "country '" + fields[0] + "' listed twice");
    rows.push_back(fields[0]);
    for (std::size_t k = 1; k < fields.size(); ++k)
      values.push_back(fields[k].empty() ? 0.0 : parse_value(fields[k], line_no));
  }
  if (rows.empty()) throw InputError("input has a header but no records");
  Dense<double> w(rows.size(), cols.size());
  std::copy(values.begin(), values.end(), w.values().begin());
  return CountMatrix(std::move(rows), std::move(cols), std::move(w), layer, year);
}

namespace {

int year_from_stem(const std::filesystem::path& file) {
  const std::string stem = file.stem().string();
  std::size_t k = stem.size();
  while (k > 0 && std::isdigit(static_cast<unsigned char>(stem[k - 1]))) --k;
  if (k == stem.size())
    throw InputError("cannot infer the year of " + file.string() +
                     ": file name must end with the year");
  return std::stoi(stem.substr(k));
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

}  // namespace

IngestResult ingest(const std::filesystem::path& path, InputFormat format, Layer layer,
                    std::optional<int> year) {
  if (format == InputFormat::long_csv) {
    auto in = open(path);
    return ingest_long_csv(in, layer);
  }

  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(path)) {
    for (const auto& entry : std::filesystem::directory_iterator(path))
      if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw InputError("no .csv files in " + path.string());
    if (year) throw InputError("--year applies to a single wide file, not a directory");
  } else {
    files.push_back(path);
  }

  std::vector<CountMatrix> matrices;
  for (const auto& file : files) {
    auto in = open(file);
    const int y = year ? *year : year_from_stem(file);
    try {
      matrices.push_back(parse_wide_csv(in, layer, y));
    } catch (const InputError& e) {
      throw InputError(file.string() + ": " + e.what());
    }
  }
  return IngestResult{unify(layer, std::move(matrices)), {}};
}

}  // namespace compnet
