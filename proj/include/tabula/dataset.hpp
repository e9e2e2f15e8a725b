#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tabula/matrix.hpp"

namespace tabula {

enum class ColumnKind { numeric, categorical };

/// A named, homogeneously typed column.
class Column {
 public:
  Column(std::string name, std::vector<double> values);
  Column(std::string name, std::vector<std::string> values);

  const std::string& name() const noexcept { return name_; }
  ColumnKind kind() const noexcept;
  bool is_numeric() const noexcept { return kind() == ColumnKind::numeric; }
  std::size_t size() const noexcept;

  const std::vector<double>& numeric() const;
  const std::vector<std::string>& categorical() const;

  /// Cell rendered as text; reals use the shortest round-trip form.
  std::string text(std::size_t row) const;
  std::vector<std::string> texts() const;

  Column select(std::span<const std::size_t> rows) const;
  Column renamed(std::string name) const;

 private:
  std::string name_;
  std::variant<std::vector<double>, std::vector<std::string>> values_;
};

/// Feature table with an optional label column. Immutable once built; the
/// constructor enforces equal column lengths and unique names.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<Column> features, std::optional<Column> labels = std::nullopt);
  /// Zero-feature dataset with an explicit row count.
  static Dataset empty_rows(std::size_t n_rows, std::optional<Column> labels = std::nullopt);

  std::size_t n_rows() const noexcept { return n_rows_; }
  std::size_t n_features() const noexcept { return features_.size(); }

  const std::vector<Column>& features() const noexcept { return features_; }
  const Column& feature(std::size_t i) const { return features_.at(i); }
  std::optional<std::size_t> find_feature(std::string_view name) const;
  std::vector<std::string> feature_names() const;
  bool all_numeric() const;

  bool has_labels() const noexcept { return labels_.has_value(); }
  const Column& labels() const;
  /// Label cells as class names.
  std::vector<std::string> class_labels() const;
  /// Numeric label values (regression targets).
  std::vector<double> targets() const;

  /// Features as a row-major matrix; throws NonNumericFeature when any
  /// column is categorical.
  Matrix numeric_matrix() const;
  /// Named features, in the given order, as a numeric matrix.
  Matrix numeric_matrix(std::span<const std::string> names) const;

  /// Rows in the given order; repeated indices repeat rows.
  Dataset select_rows(std::span<const std::size_t> rows) const;
  Dataset with_labels(std::optional<Column> labels) const;
  Dataset with_features(std::vector<Column> features) const;

 private:
  std::vector<Column> features_;
  std::optional<Column> labels_;
  std::size_t n_rows_ = 0;
};

/// Builds a numeric dataset from a matrix; columns are named x0, x1, ...
/// unless names are given.
Dataset dataset_from_matrix(const Matrix& x, std::vector<std::string> names = {});

// ---- CSV ----

Dataset parse_csv(std::string_view text, std::optional<std::string> label_column = std::nullopt);
Dataset load_csv(const std::filesystem::path& path, std::optional<std::string> label_column = std::nullopt);

/// Header plus rows; the label column (if any) is written last. Reals use 17
/// significant digits so a reload reproduces them exactly.
std::string to_csv(const Dataset& d);
void save_csv(const Dataset& d, const std::filesystem::path& path);

std::string format_real(double value);

// ---- splitting ----

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

struct Split {
  Dataset train;
  Dataset test;
  SplitIndices indices;
};

SplitIndices split_indices(const Dataset& d, double test_fraction, std::uint64_t seed, bool stratified);
Split train_test_split(const Dataset& d, double test_fraction, std::uint64_t seed, bool stratified);

/// Distinct labels in sorted order and, per label, the row indices holding it.
struct ClassGroups {
  std::vector<std::string> classes;
  std::vector<std::vector<std::size_t>> rows;
};
ClassGroups group_by_class(std::span<const std::string> labels);

// ---- scaling ----

enum class ScaleKind { standardize, min_max };

struct ColumnScale {
  std::string column;
  double center = 0.0;  ///< mean, or min
  double spread = 1.0;  ///< population sd, or max - min
};

struct ScalerParams {
  ScaleKind kind = ScaleKind::standardize;
  std::vector<ColumnScale> columns;
};

ScalerParams fit_scaler(const Dataset& d, ScaleKind kind);
/// Rescales every numeric column named in `p`; other columns pass through.
Dataset apply_scaler(const Dataset& d, const ScalerParams& p);

std::string_view to_string(ScaleKind kind);
ScaleKind parse_scale_kind(std::string_view text);

}  // namespace tabula
