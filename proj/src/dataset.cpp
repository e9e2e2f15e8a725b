#include "tabula/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "tabula/error.hpp"
#include "tabula/rng.hpp"

namespace tabula {

// ---- Column ----

Column::Column(std::string name, std::vector<double> values) : name_(std::move(name)), values_(std::move(values)) {}

Column::Column(std::string name, std::vector<std::string> values)
    : name_(std::move(name)), values_(std::move(values)) {}

ColumnKind Column::kind() const noexcept {
  return std::holds_alternative<std::vector<double>>(values_) ? ColumnKind::numeric : ColumnKind::categorical;
}

std::size_t Column::size() const noexcept {
  return std::visit([](const auto& v) { return v.size(); }, values_);
}

const std::vector<double>& Column::numeric() const {
  if (const auto* v = std::get_if<std::vector<double>>(&values_)) return *v;
  throw Error(ErrorCode::non_numeric_feature, "column '" + name_ + "' is categorical");
}

const std::vector<std::string>& Column::categorical() const {
  if (const auto* v = std::get_if<std::vector<std::string>>(&values_)) return *v;
  throw Error(ErrorCode::invalid_argument, "column '" + name_ + "' is numeric");
}

namespace {

std::string shortest(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

}  // namespace

std::string Column::text(std::size_t row) const {
  if (is_numeric()) return shortest(numeric().at(row));
  return categorical().at(row);
}

std::vector<std::string> Column::texts() const {
  if (!is_numeric()) return categorical();
  std::vector<std::string> out;
  out.reserve(size());
  for (double v : numeric()) out.push_back(shortest(v));
  return out;
}

Column Column::select(std::span<const std::size_t> rows) const {
  return std::visit(
      [&](const auto& values) {
        std::remove_cvref_t<decltype(values)> picked;
        picked.reserve(rows.size());
        for (std::size_t r : rows) picked.push_back(values.at(r));
        return Column(name_, std::move(picked));
      },
      values_);
}

Column Column::renamed(std::string name) const {
  Column c = *this;
  c.name_ = std::move(name);
  return c;
}

// ---- Dataset ----

Dataset::Dataset(std::vector<Column> features, std::optional<Column> labels)
    : features_(std::move(features)), labels_(std::move(labels)) {
  if (!features_.empty()) {
    n_rows_ = features_.front().size();
  } else if (labels_) {
    n_rows_ = labels_->size();
  }
  std::set<std::string> names;
  for (const auto& c : features_) {
    if (c.size() != n_rows_)
      throw Error(ErrorCode::ragged_row, "column '" + c.name() + "' has " + std::to_string(c.size()) +
                                             " entries, expected " + std::to_string(n_rows_));
    if (!names.insert(c.name()).second) throw Error(ErrorCode::duplicate_header, "column '" + c.name() + "'");
  }
  if (labels_) {
    if (labels_->size() != n_rows_) throw Error(ErrorCode::ragged_row, "label column length differs from features");
    if (names.contains(labels_->name()))
      throw Error(ErrorCode::duplicate_header, "label '" + labels_->name() + "' clashes with a feature");
  }
}

Dataset Dataset::empty_rows(std::size_t n_rows, std::optional<Column> labels) {
  Dataset d({}, std::move(labels));
  if (d.labels_ && d.labels_->size() != n_rows) throw Error(ErrorCode::ragged_row, "label column length");
  d.n_rows_ = n_rows;
  return d;
}

std::optional<std::size_t> Dataset::find_feature(std::string_view name) const {
  for (std::size_t i = 0; i < features_.size(); ++i)
    if (features_[i].name() == name) return i;
  return std::nullopt;
}

std::vector<std::string> Dataset::feature_names() const {
  std::vector<std::string> names;
  for (const auto& c : features_) names.push_back(c.name());
  return names;
}

bool Dataset::all_numeric() const {
  return std::all_of(features_.begin(), features_.end(), [](const Column& c) { return c.is_numeric(); });
}

const Column& Dataset::labels() const {
  if (!labels_) throw Error(ErrorCode::missing_labels, "dataset has no label column");
  return *labels_;
}

std::vector<std::string> Dataset::class_labels() const { return labels().texts(); }

std::vector<double> Dataset::targets() const {
  const Column& l = labels();
  if (!l.is_numeric()) throw Error(ErrorCode::non_numeric_feature, "label '" + l.name() + "' is not numeric");
  return l.numeric();
}

Matrix Dataset::numeric_matrix() const {
  Matrix x(n_rows_, features_.size());
  for (std::size_t c = 0; c < features_.size(); ++c) {
    const auto& values = features_[c].numeric();
    for (std::size_t r = 0; r < n_rows_; ++r) x(r, c) = values[r];
  }
  return x;
}

Matrix Dataset::numeric_matrix(std::span<const std::string> names) const {
  Matrix x(n_rows_, names.size());
  for (std::size_t c = 0; c < names.size(); ++c) {
    auto idx = find_feature(names[c]);
    if (!idx) throw Error(ErrorCode::unknown_column, "feature '" + names[c] + "' missing from data");
    const auto& values = features_[*idx].numeric();
    for (std::size_t r = 0; r < n_rows_; ++r) x(r, c) = values[r];
  }
  return x;
}

Dataset Dataset::select_rows(std::span<const std::size_t> rows) const {
  for (std::size_t r : rows)
    if (r >= n_rows_) throw Error(ErrorCode::shape_mismatch, "row index " + std::to_string(r) + " out of range");
  std::vector<Column> cols;
  cols.reserve(features_.size());
  for (const auto& c : features_) cols.push_back(c.select(rows));
  std::optional<Column> labels;
  if (labels_) labels = labels_->select(rows);
  if (cols.empty()) return empty_rows(rows.size(), std::move(labels));
  return Dataset(std::move(cols), std::move(labels));
}

Dataset Dataset::with_labels(std::optional<Column> labels) const {
  if (features_.empty()) return empty_rows(n_rows_, std::move(labels));
  return Dataset(features_, std::move(labels));
}

Dataset Dataset::with_features(std::vector<Column> features) const { return Dataset(std::move(features), labels_); }

Dataset dataset_from_matrix(const Matrix& x, std::vector<std::string> names) {
  if (names.empty())
    for (std::size_t c = 0; c < x.cols(); ++c) names.push_back("x" + std::to_string(c));
  if (names.size() != x.cols()) throw Error(ErrorCode::shape_mismatch, "column name count");
  std::vector<Column> cols;
  for (std::size_t c = 0; c < x.cols(); ++c) cols.emplace_back(names[c], x.column(c));
  if (cols.empty()) return Dataset::empty_rows(x.rows());
  return Dataset(std::move(cols));
}

// ---- CSV ----

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(ch);
      }
    } else if (ch == '"' && trim(cur).empty()) {
      cur.clear();
      quoted = true;
      was_quoted = true;
    } else if (ch == ',') {
      cells.push_back(was_quoted ? cur : std::string(trim(cur)));
      cur.clear();
      was_quoted = false;
    } else {
      cur.push_back(ch);
    }
  }
  cells.push_back(was_quoted ? cur : std::string(trim(cur)));
  return cells;
}

std::optional<double> parse_real(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

Column build_column(std::string name, std::vector<std::string> cells) {
  std::vector<double> reals;
  reals.reserve(cells.size());
  for (const auto& cell : cells) {
    auto v = parse_real(cell);
    if (!v) return Column(std::move(name), std::move(cells));
    reals.push_back(*v);
  }
  return Column(std::move(name), std::move(reals));
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos && trim(s) == s) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

}  // namespace

Dataset parse_csv(std::string_view text, std::optional<std::string> label_column) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = nl + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw Error(ErrorCode::empty_file, "no header row");

  const auto header = split_line(lines.front());
  std::set<std::string> seen;
  for (const auto& h : header) {
    if (h.empty()) throw Error(ErrorCode::missing_value, "empty header name");
    if (!seen.insert(h).second) throw Error(ErrorCode::duplicate_header, "'" + h + "'");
  }
  std::optional<std::size_t> label_index;
  if (label_column) {
    auto it = std::find(header.begin(), header.end(), *label_column);
    if (it == header.end()) throw Error(ErrorCode::unknown_column, "label column '" + *label_column + "' not in header");
    label_index = static_cast<std::size_t>(it - header.begin());
  }

  std::vector<std::vector<std::string>> cells(header.size());
  for (std::size_t li = 1; li < lines.size(); ++li) {
    auto row = split_line(lines[li]);
    if (row.size() != header.size())
      throw Error(ErrorCode::ragged_row, "row " + std::to_string(li) + " has " + std::to_string(row.size()) +
                                             " cells, header has " + std::to_string(header.size()));
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (row[c].empty())
        throw Error(ErrorCode::missing_value, "row " + std::to_string(li) + ", column '" + header[c] + "'");
      cells[c].push_back(std::move(row[c]));
    }
  }
  const std::size_t n_rows = lines.size() - 1;

  std::vector<Column> features;
  std::optional<Column> labels;
  for (std::size_t c = 0; c < header.size(); ++c) {
    Column col = build_column(header[c], std::move(cells[c]));
    if (label_index && c == *label_index) {
      labels = std::move(col);
    } else {
      features.push_back(std::move(col));
    }
  }
  if (features.empty()) return Dataset::empty_rows(n_rows, std::move(labels));
  return Dataset(std::move(features), std::move(labels));
}

Dataset load_csv(const std::filesystem::path& path, std::optional<std::string> label_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_failure, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), std::move(label_column));
}

std::string format_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string to_csv(const Dataset& d) {
  std::vector<const Column*> cols;
  for (const auto& c : d.features()) cols.push_back(&c);
  if (d.has_labels()) cols.push_back(&d.labels());
  std::string out;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out.push_back(',');
    out += quote_if_needed(cols[i]->name());
  }
  out.push_back('\n');
  for (std::size_t r = 0; r < d.n_rows(); ++r) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) out.push_back(',');
      if (cols[i]->is_numeric()) {
        out += format_real(cols[i]->numeric()[r]);
      } else {
        out += quote_if_needed(cols[i]->categorical()[r]);
      }
    }
    out.push_back('\n');
  }
  return out;
}

void save_csv(const Dataset& d, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_failure, "cannot write " + path.string());
  out << to_csv(d);
  if (!out) throw Error(ErrorCode::io_failure, "write failed for " + path.string());
}

// ---- splitting ----

ClassGroups group_by_class(std::span<const std::string> labels) {
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i]].push_back(i);
  ClassGroups out;
  for (auto& [label, rows] : groups) {
    out.classes.push_back(label);
    out.rows.push_back(std::move(rows));
  }
  return out;
}

SplitIndices split_indices(const Dataset& d, double test_fraction, std::uint64_t seed, bool stratified) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw Error(ErrorCode::fraction_out_of_range, "test fraction must lie in (0,1), got " + format_real(test_fraction));
  if (stratified && !d.has_labels()) throw Error(ErrorCode::stratify_without_labels, "stratified split needs labels");
  const std::size_t n = d.n_rows();
  if (n < 2) throw Error(ErrorCode::empty, "split needs at least 2 rows");

  Rng rng(seed);
  std::vector<bool> in_test(n, false);
  const auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));

  if (!stratified) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(std::span(order));
    for (std::size_t i = 0; i < n_test; ++i) in_test[order[i]] = true;
  } else {
    const auto labels = d.class_labels();
    auto groups = group_by_class(labels);
    // Largest-remainder apportionment keeps the total at round(f*n) while
    // every class stays within one row of f*class_size.
    const std::size_t k = groups.classes.size();
    std::vector<std::size_t> quota(k);
    std::vector<double> remainder(k);
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < k; ++c) {
      const double exact = test_fraction * static_cast<double>(groups.rows[c].size());
      quota[c] = static_cast<std::size_t>(std::floor(exact));
      remainder[c] = exact - std::floor(exact);
      assigned += quota[c];
    }
    std::vector<std::size_t> by_remainder(k);
    std::iota(by_remainder.begin(), by_remainder.end(), 0);
    std::stable_sort(by_remainder.begin(), by_remainder.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t i = 0; assigned < n_test && i < k; ++i) {
      const std::size_t c = by_remainder[i];
      if (quota[c] < groups.rows[c].size() && remainder[c] > 0.0) {
        ++quota[c];
        ++assigned;
      }
    }
    for (std::size_t c = 0; c < k; ++c) {
      auto& rows = groups.rows[c];
      rng.shuffle(std::span(rows));
      for (std::size_t i = 0; i < quota[c]; ++i) in_test[rows[i]] = true;
    }
  }

  SplitIndices out;
  for (std::size_t i = 0; i < n; ++i) (in_test[i] ? out.test : out.train).push_back(i);
  return out;
}

Split train_test_split(const Dataset& d, double test_fraction, std::uint64_t seed, bool stratified) {
  auto idx = split_indices(d, test_fraction, seed, stratified);
  Split s{d.select_rows(idx.train), d.select_rows(idx.test), {}};
  s.indices = std::move(idx);
  return s;
}

// ---- scaling ----

ScalerParams fit_scaler(const Dataset& d, ScaleKind kind) {
  ScalerParams p;
  p.kind = kind;
  for (const auto& col : d.features()) {
    if (!col.is_numeric()) continue;
    const auto& v = col.numeric();
    ColumnScale s{col.name(), 0.0, 0.0};
    if (v.empty()) throw Error(ErrorCode::constant_column, "column '" + col.name() + "' is empty");
    if (kind == ScaleKind::standardize) {
      double mean = 0.0;
      for (double x : v) mean += x;
      mean /= static_cast<double>(v.size());
      double var = 0.0;
      for (double x : v) var += (x - mean) * (x - mean);
      var /= static_cast<double>(v.size());
      s.center = mean;
      s.spread = std::sqrt(var);
    } else {
      auto [lo, hi] = std::minmax_element(v.begin(), v.end());
      s.center = *lo;
      s.spread = *hi - *lo;
    }
    if (!(s.spread > 0.0)) throw Error(ErrorCode::constant_column, "column '" + col.name() + "' is constant");
    p.columns.push_back(std::move(s));
  }
  return p;
}

Dataset apply_scaler(const Dataset& d, const ScalerParams& p) {
  std::vector<Column> cols = d.features();
  for (const auto& s : p.columns) {
    auto idx = d.find_feature(s.column);
    if (!idx) throw Error(ErrorCode::unknown_column, "scaler column '" + s.column + "' missing from data");
    std::vector<double> v = d.feature(*idx).numeric();
    for (double& x : v) x = (x - s.center) / s.spread;
    cols[*idx] = Column(s.column, std::move(v));
  }
  if (cols.empty()) return d;
  return d.with_features(std::move(cols));
}

std::string_view to_string(ScaleKind kind) { return kind == ScaleKind::standardize ? "standard" : "minmax"; }

ScaleKind parse_scale_kind(std::string_view text) {
  if (text == "standard" || text == "standardize" || text == "zscore") return ScaleKind::standardize;
  if (text == "minmax" || text == "min-max") return ScaleKind::min_max;
  throw Error(ErrorCode::invalid_argument, "unknown scaler kind '" + std::string(text) + "'");
}

}  // namespace tabula
