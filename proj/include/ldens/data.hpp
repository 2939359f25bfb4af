#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ldens {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Labels = std::vector<int>;

enum class ColumnKind { Numerical, Categorical, Label };

struct Column {
  std::string name;
  ColumnKind kind = ColumnKind::Numerical;
};

struct ColumnSchema {
  std::vector<Column> columns;
  std::string positive_label;

  std::size_t label_index() const;
  std::size_t feature_count() const { return columns.size() - 1; }

  /// Throws ConfigError unless exactly one label column and one or more features.
  void validate() const;
};

/// Parses the `column_name,kind` / `positive_label=<value>` sidecar format.
ColumnSchema parse_schema(const std::string& text);
ColumnSchema load_schema(const std::filesystem::path& path);

/// One CSV row; std::nullopt marks a "?" cell.
using RawRow = std::vector<std::optional<std::string>>;

struct RawTable {
  std::vector<std::string> header;
  std::vector<RawRow> rows;
};

RawTable load_csv(const std::filesystem::path& path, const ColumnSchema& schema);
RawTable parse_csv(const std::string& text, const ColumnSchema& schema);

struct ColumnStats {
  double mean = 0.0;
  double stddev = 1.0;
};

/// Maps raw cells to encoded feature columns. Categories and numerical
/// statistics are fitted on one set of rows and then applied to any row.
class Encoder {
 public:
  static Encoder fit(const RawTable& table, const ColumnSchema& schema,
                     const std::vector<std::size_t>& rows);

  std::size_t width() const { return width_; }
  const std::vector<ColumnStats>& stats() const { return stats_; }

  void transform(const RawTable& table, const std::vector<std::size_t>& rows, Matrix& x,
                 Labels& y) const;

 private:
  struct Feature {
    std::size_t raw_column = 0;
    ColumnKind kind = ColumnKind::Numerical;
    std::size_t offset = 0;                // first encoded column
    std::vector<std::string> categories;   // first-appearance order
    std::size_t stats_index = 0;
  };

  std::vector<Feature> features_;
  std::vector<ColumnStats> stats_;
  std::size_t label_column_ = 0;
  std::string positive_label_;
  std::size_t width_ = 0;
};

struct Dataset {
  std::string name;
  Matrix x;
  Labels y;
  /// Per numerical column, in schema order; fitted on the rows this dataset
  /// was standardized against.
  std::vector<ColumnStats> standardization_stats;

  /// Complete raw rows this dataset was encoded from, so a split can refit
  /// the encoder on its own training rows.
  std::shared_ptr<const RawTable> source;
  std::shared_ptr<const ColumnSchema> schema;
  std::vector<std::size_t> source_rows;
  std::size_t dropped_rows = 0;

  std::size_t size() const { return y.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(x.cols()); }
};

/// Drops incomplete rows, one-hot encodes categoricals, standardizes
/// numericals against all surviving rows.
Dataset preprocess(const RawTable& raw, const ColumnSchema& schema, std::string name = {});

struct Split {
  Dataset train;
  Dataset test;
};

/// Seeded shuffle, then the first ceil(test_fraction * m) rows form the test
/// split. The encoder is refitted on training rows only.
Split shuffle_split(const Dataset& dataset, double test_fraction, std::uint64_t seed);

struct RowRange {
  std::size_t begin = 0;
  std::size_t count = 0;
};

struct IncrementPartition {
  std::size_t increment_size = 0;
  std::vector<RowRange> slices;

  std::size_t count() const { return slices.size(); }
};

/// floor(m / u) increments; leftover rows join the last one.
IncrementPartition partition_increments(std::size_t train_rows, std::size_t increment_size);

/// Registered dataset: `<dir>/<name>.csv` with `<dir>/<name>.schema`.
struct DatasetEntry {
  std::string name;
  std::filesystem::path csv;
  std::filesystem::path schema;
};

std::vector<DatasetEntry> list_datasets(const std::filesystem::path& dir);

/// Accepts a registered name (looked up in `dir`) or a path to a CSV whose
/// schema sits next to it with the `.schema` extension.
DatasetEntry resolve_dataset(const std::string& name_or_path, const std::filesystem::path& dir);

Dataset load_dataset(const DatasetEntry& entry);

}  // namespace ldens
