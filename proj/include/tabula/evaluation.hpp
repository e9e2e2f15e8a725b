#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tabula/dataset.hpp"
#include "tabula/model.hpp"
#include "tabula/rng.hpp"

namespace tabula {

/// nullopt marks a metric whose denominator is zero.
using MetricValue = std::optional<double>;

struct BinaryCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
};

/// counts[true][pred] over a sorted class list.
class ConfusionMatrix {
 public:
  ConfusionMatrix(std::vector<std::string> classes, std::vector<std::vector<std::size_t>> counts);
  static ConfusionMatrix from_labels(std::span<const std::string> y_true, std::span<const std::string> y_pred);
  /// Two-class matrix over {"negative", "positive"}.
  static ConfusionMatrix from_binary(BinaryCounts c);

  const std::vector<std::string>& classes() const noexcept { return classes_; }
  std::size_t count(std::size_t truth, std::size_t predicted) const { return counts_.at(truth).at(predicted); }
  std::size_t total() const noexcept { return total_; }
  std::size_t trace() const;
  std::size_t support(std::size_t cls) const;
  std::size_t index_of(const std::string& label) const;
  BinaryCounts binary(const std::string& positive) const;

 private:
  std::vector<std::string> classes_;
  std::vector<std::vector<std::size_t>> counts_;
  std::size_t total_ = 0;
};

double accuracy(const ConfusionMatrix& cm);
double error_rate(const ConfusionMatrix& cm);
MetricValue precision(const ConfusionMatrix& cm, const std::string& positive);
MetricValue recall(const ConfusionMatrix& cm, const std::string& positive);
MetricValue sensitivity(const ConfusionMatrix& cm, const std::string& positive);
MetricValue specificity(const ConfusionMatrix& cm, const std::string& positive);
MetricValue f1(const ConfusionMatrix& cm, const std::string& positive);
MetricValue f1_from(MetricValue p, MetricValue r);

double mse(std::span<const double> y_true, std::span<const double> y_pred);

struct ClassReport {
  std::string label;
  MetricValue precision;
  MetricValue recall;
  MetricValue f1;
  std::size_t support = 0;
};

struct AverageReport {
  MetricValue precision;
  MetricValue recall;
  MetricValue f1;
  std::size_t support = 0;
};

/// Per-class rows plus macro and support-weighted averages. Undefined
/// per-class values are skipped when averaging.
struct ClassificationReport {
  double accuracy = 0.0;
  std::vector<ClassReport> per_class;
  AverageReport macro;
  AverageReport weighted;
};

ClassificationReport classification_report(const ConfusionMatrix& cm);
Json to_json(const ClassificationReport& r);
Json to_json(const ConfusionMatrix& cm);

// ---- resampling ----

/// Test-fold row sets; the training rows of fold f are all others.
struct FoldPlan {
  std::size_t n_rows = 0;
  bool stratified = false;
  std::uint64_t seed = 0;
  std::vector<std::vector<std::size_t>> folds;

  std::size_t k() const noexcept { return folds.size(); }
  std::vector<std::size_t> train_rows(std::size_t fold) const;
};

FoldPlan k_fold(const Dataset& d, std::size_t k, bool stratified, std::uint64_t seed);
/// Single-fold plan from a hold-out split.
FoldPlan holdout_plan(const Dataset& d, double test_fraction, std::uint64_t seed, bool stratified);

struct BootstrapSample {
  std::vector<std::size_t> in_bag_rows;  ///< n draws with replacement
  std::vector<std::size_t> oob_rows;     ///< rows never drawn, ascending
};

BootstrapSample bootstrap_rows(std::size_t n, Rng& rng);

struct Bootstrap {
  Dataset in_bag;
  Dataset out_of_bag;
  BootstrapSample rows;
};

Bootstrap bootstrap(const Dataset& d, std::uint64_t seed);

enum class ScoreMetric { accuracy, error, f1_macro, mse };

ScoreMetric parse_score_metric(std::string_view text);
std::string_view to_string(ScoreMetric m);
bool higher_is_better(ScoreMetric m);

/// Scores a fitted predictor on labelled data.
double score(const Predictor& model, const Dataset& test, ScoreMetric metric);

struct CvResult {
  std::vector<double> fold_scores;
  double mean = 0.0;
};

/// Folds are fitted in parallel; scores are reported in fold order. Fold f
/// fits with seed plan.seed + f.
CvResult cross_validate(const Dataset& d, const FoldPlan& plan, const Estimator& estimator, ScoreMetric metric);

// ---- hyperparameter search ----

/// One hyperparameter: a discrete candidate list, or (random mode only) a
/// continuous range [low, high].
struct ParamAxis {
  std::string name;
  std::vector<std::string> values;
  std::optional<std::pair<double, double>> range;
};

enum class SearchMode { grid, random };

struct SearchSpace {
  std::vector<ParamAxis> axes;
  SearchMode mode = SearchMode::grid;
  std::size_t samples = 0;
  std::uint64_t seed = 0;

  /// `k=1,3,5;scale=standard,minmax;C=~0.1:10`. `a..b` expands an integer
  /// range; `~lo:hi` declares a continuous range.
  static SearchSpace parse(std::string_view text, SearchMode mode = SearchMode::grid, std::size_t samples = 0,
                           std::uint64_t seed = 0);
  std::size_t grid_size() const;
};

struct SearchEntry {
  std::map<std::string, std::string> params;
  CvResult cv;
};

struct SearchResult {
  std::map<std::string, std::string> best;
  double best_score = 0.0;
  std::vector<SearchEntry> table;
};

/// Exhaustive Cartesian product; ties go to the first configuration in
/// enumeration order (last axis varies fastest).
SearchResult grid_search(const Dataset& d, const SearchSpace& space, const AlgoSpec& base, const FoldPlan& plan,
                         ScoreMetric metric);
/// Draws `space.samples` configurations. Purely discrete spaces are sampled
/// without replacement and evaluated in enumeration order, so a sample count
/// equal to the grid size reproduces grid search.
SearchResult random_search(const Dataset& d, const SearchSpace& space, const AlgoSpec& base, const FoldPlan& plan,
                           ScoreMetric metric);

Json to_json(const SearchResult& r, ScoreMetric metric);

}  // namespace tabula
