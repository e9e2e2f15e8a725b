#include "tabula/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "tabula/error.hpp"
#include "tabula/parallel.hpp"

namespace tabula {

// ---- confusion matrix ----

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> classes, std::vector<std::vector<std::size_t>> counts)
    : classes_(std::move(classes)), counts_(std::move(counts)) {
  if (counts_.size() != classes_.size()) throw Error(ErrorCode::shape_mismatch, "confusion rows vs classes");
  for (const auto& row : counts_) {
    if (row.size() != classes_.size()) throw Error(ErrorCode::shape_mismatch, "confusion columns vs classes");
    for (std::size_t c : row) total_ += c;
  }
}

ConfusionMatrix ConfusionMatrix::from_labels(std::span<const std::string> y_true, std::span<const std::string> y_pred) {
  if (y_true.size() != y_pred.size())
    throw Error(ErrorCode::length_mismatch, std::to_string(y_true.size()) + " vs " + std::to_string(y_pred.size()));
  if (y_true.empty()) throw Error(ErrorCode::empty, "no labels to compare");
  std::set<std::string> labels(y_true.begin(), y_true.end());
  labels.insert(y_pred.begin(), y_pred.end());
  std::vector<std::string> classes(labels.begin(), labels.end());
  std::vector<std::vector<std::size_t>> counts(classes.size(), std::vector<std::size_t>(classes.size(), 0));
  auto index = [&](const std::string& s) {
    return static_cast<std::size_t>(std::lower_bound(classes.begin(), classes.end(), s) - classes.begin());
  };
  for (std::size_t i = 0; i < y_true.size(); ++i) ++counts[index(y_true[i])][index(y_pred[i])];
  return ConfusionMatrix(std::move(classes), std::move(counts));
}

ConfusionMatrix ConfusionMatrix::from_binary(BinaryCounts c) {
  return ConfusionMatrix({"negative", "positive"}, {{c.tn, c.fp}, {c.fn, c.tp}});
}

std::size_t ConfusionMatrix::trace() const {
  std::size_t t = 0;
  for (std::size_t i = 0; i < classes_.size(); ++i) t += counts_[i][i];
  return t;
}

std::size_t ConfusionMatrix::support(std::size_t cls) const {
  return std::accumulate(counts_.at(cls).begin(), counts_.at(cls).end(), std::size_t{0});
}

std::size_t ConfusionMatrix::index_of(const std::string& label) const {
  auto it = std::find(classes_.begin(), classes_.end(), label);
  if (it == classes_.end()) throw Error(ErrorCode::unknown_category, "class '" + label + "' not in confusion matrix");
  return static_cast<std::size_t>(it - classes_.begin());
}

BinaryCounts ConfusionMatrix::binary(const std::string& positive) const {
  const std::size_t p = index_of(positive);
  BinaryCounts b;
  for (std::size_t t = 0; t < classes_.size(); ++t)
    for (std::size_t q = 0; q < classes_.size(); ++q) {
      const std::size_t c = counts_[t][q];
      if (t == p && q == p) {
        b.tp += c;
      } else if (t == p) {
        b.fn += c;
      } else if (q == p) {
        b.fp += c;
      } else {
        b.tn += c;
      }
    }
  return b;
}

// ---- metrics ----

namespace {

MetricValue ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

double accuracy(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw Error(ErrorCode::empty, "empty confusion matrix");
  return static_cast<double>(cm.trace()) / static_cast<double>(cm.total());
}

double error_rate(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw Error(ErrorCode::empty, "empty confusion matrix");
  return static_cast<double>(cm.total() - cm.trace()) / static_cast<double>(cm.total());
}

MetricValue precision(const ConfusionMatrix& cm, const std::string& positive) {
  const auto b = cm.binary(positive);
  return ratio(b.tp, b.tp + b.fp);
}

MetricValue recall(const ConfusionMatrix& cm, const std::string& positive) {
  const auto b = cm.binary(positive);
  return ratio(b.tp, b.tp + b.fn);
}

MetricValue sensitivity(const ConfusionMatrix& cm, const std::string& positive) { return recall(cm, positive); }

MetricValue specificity(const ConfusionMatrix& cm, const std::string& positive) {
  const auto b = cm.binary(positive);
  return ratio(b.tn, b.tn + b.fp);
}

MetricValue f1_from(MetricValue p, MetricValue r) {
  if (!p || !r || *p + *r == 0.0) return std::nullopt;
  return 2.0 * *p * *r / (*p + *r);
}

MetricValue f1(const ConfusionMatrix& cm, const std::string& positive) {
  return f1_from(precision(cm, positive), recall(cm, positive));
}

double mse(std::span<const double> y_true, std::span<const double> y_pred) {
  if (y_true.size() != y_pred.size())
    throw Error(ErrorCode::length_mismatch, std::to_string(y_true.size()) + " vs " + std::to_string(y_pred.size()));
  if (y_true.empty()) throw Error(ErrorCode::empty, "mse of empty vectors");
  double s = 0.0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const double r = y_pred[i] - y_true[i];
    s += r * r;
  }
  return s / static_cast<double>(y_true.size());
}

ClassificationReport classification_report(const ConfusionMatrix& cm) {
  ClassificationReport r;
  r.accuracy = accuracy(cm);
  struct Acc {
    double sum = 0.0;
    double weighted = 0.0;
    std::size_t n = 0;
    std::size_t support = 0;
    void add(MetricValue v, std::size_t s) {
      if (!v) return;
      sum += *v;
      weighted += *v * static_cast<double>(s);
      ++n;
      support += s;
    }
  } p, rc, f;
  for (std::size_t c = 0; c < cm.classes().size(); ++c) {
    const auto& label = cm.classes()[c];
    ClassReport row{label, precision(cm, label), recall(cm, label), f1(cm, label), cm.support(c)};
    p.add(row.precision, row.support);
    rc.add(row.recall, row.support);
    f.add(row.f1, row.support);
    r.per_class.push_back(std::move(row));
  }
  auto macro = [](const Acc& a) -> MetricValue {
    if (a.n == 0) return std::nullopt;
    return a.sum / static_cast<double>(a.n);
  };
  auto weighted = [](const Acc& a) -> MetricValue {
    if (a.support == 0) return std::nullopt;
    return a.weighted / static_cast<double>(a.support);
  };
  r.macro = {macro(p), macro(rc), macro(f), cm.total()};
  r.weighted = {weighted(p), weighted(rc), weighted(f), cm.total()};
  return r;
}

namespace {

Json metric_json(MetricValue v) { return v ? Json(*v) : Json(nullptr); }

Json average_json(const AverageReport& a) {
  return Json{{"precision", metric_json(a.precision)},
              {"recall", metric_json(a.recall)},
              {"f1", metric_json(a.f1)},
              {"support", a.support}};
}

}  // namespace

Json to_json(const ClassificationReport& r) {
  Json per_class = Json::array();
  for (const auto& c : r.per_class) {
    per_class.push_back({{"label", c.label},
                         {"precision", metric_json(c.precision)},
                         {"recall", metric_json(c.recall)},
                         {"f1", metric_json(c.f1)},
                         {"support", c.support}});
  }
  return Json{{"accuracy", r.accuracy},
              {"per_class", per_class},
              {"macro_avg", average_json(r.macro)},
              {"weighted_avg", average_json(r.weighted)}};
}

Json to_json(const ConfusionMatrix& cm) {
  Json counts = Json::array();
  for (std::size_t t = 0; t < cm.classes().size(); ++t) {
    Json row = Json::array();
    for (std::size_t p = 0; p < cm.classes().size(); ++p) row.push_back(cm.count(t, p));
    counts.push_back(row);
  }
  return Json{{"classes", cm.classes()}, {"counts", counts}};
}

// ---- resampling ----

std::vector<std::size_t> FoldPlan::train_rows(std::size_t fold) const {
  std::vector<bool> held(n_rows, false);
  for (std::size_t r : folds.at(fold)) held[r] = true;
  std::vector<std::size_t> out;
  out.reserve(n_rows - folds[fold].size());
  for (std::size_t r = 0; r < n_rows; ++r)
    if (!held[r]) out.push_back(r);
  return out;
}

FoldPlan k_fold(const Dataset& d, std::size_t k, bool stratified, std::uint64_t seed) {
  const std::size_t n = d.n_rows();
  if (k < 2) throw Error(ErrorCode::invalid_argument, "k-fold needs k >= 2");
  if (k > n) throw Error(ErrorCode::k_too_large, "k=" + std::to_string(k) + " exceeds " + std::to_string(n) + " rows");
  if (stratified && !d.has_labels()) throw Error(ErrorCode::stratify_without_labels, "stratified folds need labels");

  FoldPlan plan{n, stratified, seed, std::vector<std::vector<std::size_t>>(k)};
  Rng rng(seed);
  std::vector<std::size_t> order;
  if (stratified) {
    const auto labels = d.class_labels();
    auto groups = group_by_class(labels);
    for (std::size_t c = 0; c < groups.classes.size(); ++c) {
      if (groups.rows[c].size() < k)
        throw Error(ErrorCode::class_too_small, "class '" + groups.classes[c] + "' has " +
                                                    std::to_string(groups.rows[c].size()) + " rows, needs " +
                                                    std::to_string(k));
      rng.shuffle(std::span(groups.rows[c]));
      order.insert(order.end(), groups.rows[c].begin(), groups.rows[c].end());
    }
  } else {
    order.resize(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(std::span(order));
  }
  // Dealing the class-ordered sequence round-robin balances both the fold
  // sizes and the per-class counts to within one.
  for (std::size_t i = 0; i < order.size(); ++i) plan.folds[i % k].push_back(order[i]);
  for (auto& f : plan.folds) std::sort(f.begin(), f.end());
  return plan;
}

FoldPlan holdout_plan(const Dataset& d, double test_fraction, std::uint64_t seed, bool stratified) {
  auto idx = split_indices(d, test_fraction, seed, stratified);
  return FoldPlan{d.n_rows(), stratified, seed, {std::move(idx.test)}};
}

BootstrapSample bootstrap_rows(std::size_t n, Rng& rng) {
  if (n == 0) throw Error(ErrorCode::empty, "bootstrap of an empty dataset");
  BootstrapSample s;
  s.in_bag_rows.resize(n);
  std::vector<bool> drawn(n, false);
  for (auto& r : s.in_bag_rows) {
    r = static_cast<std::size_t>(rng.uniform_index(n));
    drawn[r] = true;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!drawn[i]) s.oob_rows.push_back(i);
  return s;
}

Bootstrap bootstrap(const Dataset& d, std::uint64_t seed) {
  Rng rng(seed);
  auto rows = bootstrap_rows(d.n_rows(), rng);
  return Bootstrap{d.select_rows(rows.in_bag_rows), d.select_rows(rows.oob_rows), std::move(rows)};
}

ScoreMetric parse_score_metric(std::string_view text) {
  if (text == "accuracy") return ScoreMetric::accuracy;
  if (text == "error" || text == "error_rate") return ScoreMetric::error;
  if (text == "f1" || text == "f1_macro") return ScoreMetric::f1_macro;
  if (text == "mse") return ScoreMetric::mse;
  throw Error(ErrorCode::invalid_argument, "unknown metric '" + std::string(text) + "'");
}

std::string_view to_string(ScoreMetric m) {
  switch (m) {
    case ScoreMetric::accuracy:
      return "accuracy";
    case ScoreMetric::error:
      return "error";
    case ScoreMetric::f1_macro:
      return "f1_macro";
    case ScoreMetric::mse:
      return "mse";
  }
  return "unknown";
}

bool higher_is_better(ScoreMetric m) { return m == ScoreMetric::accuracy || m == ScoreMetric::f1_macro; }

double score(const Predictor& model, const Dataset& test, ScoreMetric metric) {
  if (metric == ScoreMetric::mse) {
    const auto truth = test.targets();
    const auto pred = model.predict_values(test);
    return mse(truth, pred);
  }
  const auto truth = test.class_labels();
  const auto pred = model.predict_labels(test);
  const auto cm = ConfusionMatrix::from_labels(truth, pred);
  switch (metric) {
    case ScoreMetric::accuracy:
      return accuracy(cm);
    case ScoreMetric::error:
      return error_rate(cm);
    default: {
      const auto report = classification_report(cm);
      if (!report.macro.f1) throw Error(ErrorCode::undefined_metric, "macro F1 undefined on this fold");
      return *report.macro.f1;
    }
  }
}

CvResult cross_validate(const Dataset& d, const FoldPlan& plan, const Estimator& estimator, ScoreMetric metric) {
  if (plan.n_rows != d.n_rows()) throw Error(ErrorCode::shape_mismatch, "fold plan built for a different dataset");
  CvResult r;
  r.fold_scores.assign(plan.k(), 0.0);
  parallel_for(plan.k(), [&](std::size_t f) {
    const auto train_rows = plan.train_rows(f);
    const auto model = estimator.fit(d.select_rows(train_rows), plan.seed + f);
    r.fold_scores[f] = score(*model, d.select_rows(plan.folds[f]), metric);
  });
  r.mean = std::accumulate(r.fold_scores.begin(), r.fold_scores.end(), 0.0) / static_cast<double>(plan.k());
  return r;
}

// ---- search ----

namespace {

std::vector<std::string> split_on(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

double to_real(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw Error(ErrorCode::invalid_argument, "not a number: '" + s + "'");
  return v;
}

std::map<std::string, std::string> config_at(const SearchSpace& space, std::size_t index) {
  std::map<std::string, std::string> cfg;
  for (std::size_t a = space.axes.size(); a-- > 0;) {
    const auto& axis = space.axes[a];
    cfg[axis.name] = axis.values[index % axis.values.size()];
    index /= axis.values.size();
  }
  return cfg;
}

SearchResult run_configs(const Dataset& d, std::vector<std::map<std::string, std::string>> configs,
                         const AlgoSpec& base, const FoldPlan& plan, ScoreMetric metric) {
  SearchResult result;
  const bool maximize = higher_is_better(metric);
  for (auto& cfg : configs) {
    const Estimator est(base.with(cfg));
    auto cv = cross_validate(d, plan, est, metric);
    const bool better = result.table.empty() || (maximize ? cv.mean > result.best_score : cv.mean < result.best_score);
    if (better) {
      result.best = cfg;
      result.best_score = cv.mean;
    }
    result.table.push_back({std::move(cfg), std::move(cv)});
  }
  return result;
}

}  // namespace

SearchSpace SearchSpace::parse(std::string_view text, SearchMode mode, std::size_t samples, std::uint64_t seed) {
  SearchSpace space;
  space.mode = mode;
  space.samples = samples;
  space.seed = seed;
  for (const auto& part : split_on(text, ';')) {
    if (part.empty()) continue;
    const auto eq = part.find('=');
    if (eq == std::string::npos || eq == 0) throw Error(ErrorCode::invalid_argument, "bad search axis '" + part + "'");
    ParamAxis axis;
    axis.name = part.substr(0, eq);
    const std::string rhs = part.substr(eq + 1);
    if (rhs.starts_with("~")) {
      const auto colon = rhs.find(':');
      if (colon == std::string::npos) throw Error(ErrorCode::invalid_argument, "range needs ~low:high");
      const double lo = to_real(rhs.substr(1, colon - 1));
      const double hi = to_real(rhs.substr(colon + 1));
      if (!(lo <= hi)) throw Error(ErrorCode::invalid_argument, "empty range for '" + axis.name + "'");
      axis.range = std::make_pair(lo, hi);
    } else {
      for (const auto& v : split_on(rhs, ',')) {
        const auto dots = v.find("..");
        if (dots != std::string::npos) {
          const long lo = std::stol(v.substr(0, dots));
          const long hi = std::stol(v.substr(dots + 2));
          for (long i = lo; i <= hi; ++i) axis.values.push_back(std::to_string(i));
        } else if (!v.empty()) {
          axis.values.push_back(v);
        }
      }
      if (axis.values.empty()) throw Error(ErrorCode::empty_space, "axis '" + axis.name + "' has no values");
    }
    space.axes.push_back(std::move(axis));
  }
  return space;
}

std::size_t SearchSpace::grid_size() const {
  if (axes.empty()) return 0;
  std::size_t n = 1;
  for (const auto& a : axes) {
    if (a.range) return 0;
    n *= a.values.size();
  }
  return n;
}

SearchResult grid_search(const Dataset& d, const SearchSpace& space, const AlgoSpec& base, const FoldPlan& plan,
                         ScoreMetric metric) {
  const std::size_t n = space.grid_size();
  if (space.axes.empty() || n == 0) throw Error(ErrorCode::empty_space, "grid search needs discrete, non-empty axes");
  std::vector<std::map<std::string, std::string>> configs;
  configs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) configs.push_back(config_at(space, i));
  return run_configs(d, std::move(configs), base, plan, metric);
}

SearchResult random_search(const Dataset& d, const SearchSpace& space, const AlgoSpec& base, const FoldPlan& plan,
                           ScoreMetric metric) {
  if (space.axes.empty()) throw Error(ErrorCode::empty_space, "random search needs at least one axis");
  if (space.samples == 0) throw Error(ErrorCode::empty_space, "random search needs a sample count >= 1");
  Rng rng(space.seed);
  std::vector<std::map<std::string, std::string>> configs;
  const std::size_t n = space.grid_size();
  if (n > 0) {
    // Partial Fisher-Yates over the enumeration indices, then re-sorted so
    // ties resolve in enumeration order.
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    const std::size_t take = std::min(space.samples, n);
    for (std::size_t i = 0; i < take; ++i) std::swap(idx[i], idx[i + rng.uniform_index(n - i)]);
    idx.resize(take);
    std::sort(idx.begin(), idx.end());
    for (std::size_t i : idx) configs.push_back(config_at(space, i));
  } else {
    for (std::size_t s = 0; s < space.samples; ++s) {
      std::map<std::string, std::string> cfg;
      for (const auto& axis : space.axes) {
        if (axis.range) {
          cfg[axis.name] = format_real(rng.uniform(axis.range->first, axis.range->second));
        } else {
          cfg[axis.name] = axis.values[rng.uniform_index(axis.values.size())];
        }
      }
      configs.push_back(std::move(cfg));
    }
  }
  return run_configs(d, std::move(configs), base, plan, metric);
}

Json to_json(const SearchResult& r, ScoreMetric metric) {
  Json table = Json::array();
  for (const auto& e : r.table) table.push_back({{"params", e.params}, {"fold_scores", e.cv.fold_scores}, {"mean", e.cv.mean}});
  return Json{{"metric", std::string(to_string(metric))}, {"best", r.best}, {"best_score", r.best_score}, {"table", table}};
}

}  // namespace tabula
