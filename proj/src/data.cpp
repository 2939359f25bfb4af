#include "ldens/data.hpp"

#include "ldens/error.hpp"
#include "ldens/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace ldens {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_commas(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error("read failed: " + path.string());
  return ss.str();
}

ColumnKind parse_kind(const std::string& s) {
  if (s == "numerical") return ColumnKind::Numerical;
  if (s == "categorical") return ColumnKind::Categorical;
  if (s == "label") return ColumnKind::Label;
  throw ConfigError("unknown column kind '" + s + "'");
}

bool row_complete(const RawRow& row) {
  return std::all_of(row.begin(), row.end(), [](const auto& c) { return c.has_value(); });
}

double parse_number(const std::string& s, const std::string& column) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || !std::isfinite(v))
    throw Error("column '" + column + "': not a finite number: '" + s + "'");
  return v;
}

Dataset encode(const RawTable& raw, std::shared_ptr<const RawTable> source,
               std::shared_ptr<const ColumnSchema> schema, std::vector<std::size_t> rows,
               const Encoder& enc, std::string name, std::size_t dropped) {
  Dataset d;
  d.name = std::move(name);
  enc.transform(raw, rows, d.x, d.y);
  d.standardization_stats = enc.stats();
  d.source = std::move(source);
  d.schema = std::move(schema);
  d.source_rows = std::move(rows);
  d.dropped_rows = dropped;
  return d;
}

}  // namespace

std::size_t ColumnSchema::label_index() const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i].kind == ColumnKind::Label) return i;
  throw ConfigError("schema has no label column");
}

void ColumnSchema::validate() const {
  const auto labels = std::count_if(columns.begin(), columns.end(),
                                    [](const Column& c) { return c.kind == ColumnKind::Label; });
  if (labels != 1) throw ConfigError("schema needs exactly one label column");
  if (columns.size() < 2) throw ConfigError("schema has no feature columns");
  if (positive_label.empty()) throw ConfigError("schema is missing positive_label");
}

ColumnSchema parse_schema(const std::string& text) {
  ColumnSchema schema;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    if (line.rfind("positive_label=", 0) == 0) {
      schema.positive_label = trim(line.substr(15));
      continue;
    }
    const auto parts = split_commas(line);
    if (parts.size() != 2 || parts[0].empty())
      throw ConfigError("bad schema line: '" + line + "'");
    schema.columns.push_back({parts[0], parse_kind(parts[1])});
  }
  schema.validate();
  return schema;
}

ColumnSchema load_schema(const std::filesystem::path& path) { return parse_schema(read_file(path)); }

RawTable parse_csv(const std::string& text, const ColumnSchema& schema) {
  RawTable table;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error("csv is empty (no header)");
  table.header = split_commas(line);
  if (table.header.size() != schema.columns.size())
    throw Error("header has " + std::to_string(table.header.size()) + " columns, schema has " +
                std::to_string(schema.columns.size()));
  for (std::size_t c = 0; c < table.header.size(); ++c)
    if (table.header[c] != schema.columns[c].name)
      throw Error("header column " + std::to_string(c) + " is '" + table.header[c] +
                  "', schema expects '" + schema.columns[c].name + "'");

  const std::size_t label = schema.label_index();
  std::vector<std::string> seen_labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_commas(line);
    if (cells.size() != table.header.size())
      throw Error("line " + std::to_string(line_no) + ": expected " +
                  std::to_string(table.header.size()) + " cells, got " +
                  std::to_string(cells.size()));
    RawRow row;
    row.reserve(cells.size());
    for (auto& c : cells) {
      if (c == "?")
        row.emplace_back(std::nullopt);
      else
        row.emplace_back(std::move(c));
    }
    if (row[label]) {
      const auto& v = *row[label];
      if (std::find(seen_labels.begin(), seen_labels.end(), v) == seen_labels.end()) {
        seen_labels.push_back(v);
        const bool has_positive = std::find(seen_labels.begin(), seen_labels.end(),
                                            schema.positive_label) != seen_labels.end();
        if (seen_labels.size() > 2 || (seen_labels.size() == 2 && !has_positive))
          throw Error("line " + std::to_string(line_no) + ": unknown label value '" + v + "'");
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

RawTable load_csv(const std::filesystem::path& path, const ColumnSchema& schema) {
  return parse_csv(read_file(path), schema);
}

Encoder Encoder::fit(const RawTable& table, const ColumnSchema& schema,
                     const std::vector<std::size_t>& rows) {
  Encoder enc;
  enc.label_column_ = schema.label_index();
  enc.positive_label_ = schema.positive_label;
  for (std::size_t c = 0; c < schema.columns.size(); ++c) {
    const auto kind = schema.columns[c].kind;
    if (kind == ColumnKind::Label) continue;
    Feature f;
    f.raw_column = c;
    f.kind = kind;
    f.offset = enc.width_;
    if (kind == ColumnKind::Categorical) {
      for (auto r : rows) {
        const auto& v = *table.rows[r][c];
        if (std::find(f.categories.begin(), f.categories.end(), v) == f.categories.end())
          f.categories.push_back(v);
      }
      enc.width_ += f.categories.size();
    } else {
      // Two-pass population statistics.
      double sum = 0.0;
      for (auto r : rows) sum += parse_number(*table.rows[r][c], schema.columns[c].name);
      const double n = static_cast<double>(rows.size());
      const double mean = rows.empty() ? 0.0 : sum / n;
      double ss = 0.0;
      for (auto r : rows) {
        const double d = parse_number(*table.rows[r][c], schema.columns[c].name) - mean;
        ss += d * d;
      }
      double sd = rows.empty() ? 0.0 : std::sqrt(ss / n);
      if (!(sd > 0.0)) sd = 1.0;
      f.stats_index = enc.stats_.size();
      enc.stats_.push_back({mean, sd});
      enc.width_ += 1;
    }
    enc.features_.push_back(std::move(f));
  }
  return enc;
}

void Encoder::transform(const RawTable& table, const std::vector<std::size_t>& rows, Matrix& x,
                        Labels& y) const {
  x = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width_));
  y.assign(rows.size(), 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = table.rows[rows[i]];
    const auto ei = static_cast<Eigen::Index>(i);
    for (const auto& f : features_) {
      const auto& cell = *row[f.raw_column];
      if (f.kind == ColumnKind::Categorical) {
        const auto it = std::find(f.categories.begin(), f.categories.end(), cell);
        if (it != f.categories.end())
          x(ei, static_cast<Eigen::Index>(f.offset + (it - f.categories.begin()))) = 1.0;
      } else {
        const auto& s = stats_[f.stats_index];
        x(ei, static_cast<Eigen::Index>(f.offset)) =
            (parse_number(cell, table.header[f.raw_column]) - s.mean) / s.stddev;
      }
    }
    y[i] = (*row[label_column_] == positive_label_) ? 1 : 0;
  }
}

Dataset preprocess(const RawTable& raw, const ColumnSchema& schema, std::string name) {
  schema.validate();
  if (raw.header.size() != schema.columns.size()) throw Error("label column missing from table");
  std::vector<std::size_t> kept;
  for (std::size_t r = 0; r < raw.rows.size(); ++r)
    if (row_complete(raw.rows[r])) kept.push_back(r);
  if (kept.empty()) throw Error("no complete rows remain after dropping missing values");

  // The shared copy keeps only complete rows so later refits index into it directly.
  auto source = std::make_shared<RawTable>();
  source->header = raw.header;
  source->rows.reserve(kept.size());
  for (auto r : kept) source->rows.push_back(raw.rows[r]);
  std::vector<std::size_t> rows(kept.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});

  const auto enc = Encoder::fit(*source, schema, rows);
  return encode(*source, source, std::make_shared<ColumnSchema>(schema), std::move(rows), enc,
                std::move(name), raw.rows.size() - kept.size());
}

Split shuffle_split(const Dataset& dataset, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw ConfigError("test_fraction must lie in (0, 1)");
  if (!dataset.source || !dataset.schema) throw Error("dataset has no source table to split");
  const std::size_t m = dataset.source_rows.size();
  const auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(m)));
  if (n_test == 0 || n_test >= m)
    throw ConfigError("test_fraction " + std::to_string(test_fraction) + " leaves an empty split for " +
                      std::to_string(m) + " rows");

  std::vector<std::size_t> order = dataset.source_rows;
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> test_rows(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
  std::vector<std::size_t> train_rows(order.begin() + static_cast<std::ptrdiff_t>(n_test), order.end());

  const auto enc = Encoder::fit(*dataset.source, *dataset.schema, train_rows);
  Split out{
      encode(*dataset.source, dataset.source, dataset.schema, std::move(train_rows), enc,
             dataset.name, dataset.dropped_rows),
      encode(*dataset.source, dataset.source, dataset.schema, std::move(test_rows), enc,
             dataset.name, dataset.dropped_rows),
  };
  return out;
}

IncrementPartition partition_increments(std::size_t train_rows, std::size_t increment_size) {
  if (increment_size < 1) throw ConfigError("increment size must be at least 1");
  if (increment_size > train_rows)
    throw ConfigError("increment size " + std::to_string(increment_size) + " exceeds " +
                      std::to_string(train_rows) + " training rows");
  IncrementPartition p;
  p.increment_size = increment_size;
  const std::size_t t = train_rows / increment_size;
  for (std::size_t i = 0; i < t; ++i) p.slices.push_back({i * increment_size, increment_size});
  p.slices.back().count += train_rows - t * increment_size;
  return p;
}

std::vector<DatasetEntry> list_datasets(const std::filesystem::path& dir) {
  std::vector<DatasetEntry> out;
  std::error_code ec;
  for (const auto& e : std::filesystem::directory_iterator(dir, ec)) {
    if (e.path().extension() != ".csv") continue;
    auto schema = e.path();
    schema.replace_extension(".schema");
    if (!std::filesystem::exists(schema)) continue;
    out.push_back({e.path().stem().string(), e.path(), schema});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return out;
}

DatasetEntry resolve_dataset(const std::string& name_or_path, const std::filesystem::path& dir) {
  std::filesystem::path csv(name_or_path);
  if (csv.extension() != ".csv") csv = dir / (name_or_path + ".csv");
  if (!std::filesystem::exists(csv)) throw ConfigError("dataset not found: " + csv.string());
  auto schema = csv;
  schema.replace_extension(".schema");
  if (!std::filesystem::exists(schema)) throw ConfigError("schema not found: " + schema.string());
  return {csv.stem().string(), csv, schema};
}

Dataset load_dataset(const DatasetEntry& entry) {
  const auto schema = load_schema(entry.schema);
  return preprocess(load_csv(entry.csv, schema), schema, entry.name);
}

}  // namespace ldens
