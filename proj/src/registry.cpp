#include <algorithm>
#include <numeric>

#include "tabula/ensemble.hpp"
#include "tabula/error.hpp"
#include "tabula/evaluation.hpp"
#include "tabula/model.hpp"
#include "tabula/rng.hpp"
#include "tabula/supervised/knn.hpp"
#include "tabula/supervised/naive_bayes.hpp"
#include "tabula/supervised/ols.hpp"
#include "tabula/supervised/tree.hpp"
#include "tabula/svm.hpp"

namespace tabula {

std::vector<std::string> Predictor::predict_labels(const Dataset&) const {
  throw Error(ErrorCode::invalid_argument, "regression model does not predict labels");
}

std::vector<double> Predictor::predict_values(const Dataset&) const {
  throw Error(ErrorCode::invalid_argument, "classification model does not predict values");
}

namespace {

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(std::vector<double>(m.row(r).begin(), m.row(r).end()));
  return rows;
}

Matrix matrix_from(const Json& j) { return Matrix::from_rows(j.get<std::vector<std::vector<double>>>()); }

const Json& field(const Json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::invalid_argument, std::string("model JSON lacks '") + key + "'");
  return j.at(key);
}

// ---- knn ----

class KnnPredictor final : public Predictor {
 public:
  explicit KnnPredictor(KnnModel m) : m_(std::move(m)) {}
  Task task() const override { return Task::classification; }
  std::vector<std::string> predict_labels(const Dataset& d) const override { return knn_predict(m_, d); }
  Json to_json() const override {
    return {{"type", "knn"},
            {"params",
             {{"k", m_.k},
              {"metric", m_.metric.to_string()},
              {"weights", m_.metric.weights},
              {"feature_names", m_.feature_names},
              {"rows", matrix_json(m_.rows)},
              {"labels", m_.labels}}}};
  }
  static std::unique_ptr<Predictor> from_json(const Json& p) {
    KnnModel m;
    m.k = field(p, "k").get<std::size_t>();
    m.metric = DistanceMetric::parse(field(p, "metric").get<std::string>());
    if (p.contains("weights")) m.metric.weights = p.at("weights").get<std::vector<double>>();
    m.feature_names = field(p, "feature_names").get<std::vector<std::string>>();
    m.rows = matrix_from(field(p, "rows"));
    m.labels = field(p, "labels").get<std::vector<std::string>>();
    return std::make_unique<KnnPredictor>(std::move(m));
  }

 private:
  KnnModel m_;
};

// ---- naive Bayes ----

class NbPredictor final : public Predictor {
 public:
  explicit NbPredictor(NaiveBayesModel m) : m_(std::move(m)) {}
  Task task() const override { return Task::classification; }
  std::vector<std::string> predict_labels(const Dataset& d) const override { return nb_predict(m_, d); }
  Json to_json() const override {
    Json likelihoods = Json::array();
    for (const auto& l : m_.likelihoods) {
      if (const auto* g = std::get_if<GaussianLikelihood>(&l)) {
        likelihoods.push_back({{"kind", "gaussian"}, {"mean", g->mean}, {"sd", g->sd}});
      } else {
        const auto& c = std::get<CategoricalLikelihood>(l);
        likelihoods.push_back({{"kind", "categorical"}, {"categories", c.categories}, {"prob", c.prob}});
      }
    }
    return {{"type", "naive_bayes"},
            {"params",
             {{"classes", m_.classes},
              {"priors", m_.priors},
              {"class_counts", m_.class_counts},
              {"feature_names", m_.feature_names},
              {"likelihoods", likelihoods},
              {"smoothing", m_.smoothing},
              {"sd_floor", m_.sd_floor}}}};
  }
  static std::unique_ptr<Predictor> from_json(const Json& p) {
    NaiveBayesModel m;
    m.classes = field(p, "classes").get<std::vector<std::string>>();
    m.priors = field(p, "priors").get<std::vector<double>>();
    m.class_counts = field(p, "class_counts").get<std::vector<double>>();
    m.feature_names = field(p, "feature_names").get<std::vector<std::string>>();
    m.smoothing = field(p, "smoothing").get<double>();
    m.sd_floor = field(p, "sd_floor").get<double>();
    for (const auto& l : field(p, "likelihoods")) {
      if (l.at("kind") == "gaussian") {
        m.likelihoods.emplace_back(
            GaussianLikelihood{l.at("mean").get<std::vector<double>>(), l.at("sd").get<std::vector<double>>()});
      } else {
        m.likelihoods.emplace_back(CategoricalLikelihood{l.at("categories").get<std::vector<std::string>>(),
                                                         l.at("prob").get<std::vector<std::vector<double>>>()});
      }
    }
    return std::make_unique<NbPredictor>(std::move(m));
  }

 private:
  NaiveBayesModel m_;
};

// ---- decision tree ----

std::string_view kind_name(TreeNode::Kind k) {
  switch (k) {
    case TreeNode::Kind::leaf:
      return "leaf";
    case TreeNode::Kind::threshold:
      return "threshold";
    case TreeNode::Kind::category:
      return "category";
  }
  return "leaf";
}

TreeNode::Kind parse_kind(const std::string& s) {
  if (s == "threshold") return TreeNode::Kind::threshold;
  if (s == "category") return TreeNode::Kind::category;
  return TreeNode::Kind::leaf;
}

class TreePredictor final : public Predictor {
 public:
  explicit TreePredictor(TreeModel m) : m_(std::move(m)) {}
  Task task() const override { return Task::classification; }
  std::vector<std::string> predict_labels(const Dataset& d) const override { return tree_predict(m_, d); }
  const TreeModel& model() const { return m_; }
  Json to_json() const override {
    Json nodes = Json::array();
    for (const auto& n : m_.nodes) {
      nodes.push_back({{"kind", kind_name(n.kind)},
                       {"feature", n.feature},
                       {"threshold", n.threshold},
                       {"categories", n.categories},
                       {"children", n.children},
                       {"label", n.label},
                       {"distribution", n.distribution},
                       {"support", n.support},
                       {"depth", n.depth}});
    }
    std::vector<std::string> kinds;
    for (auto k : m_.feature_kinds) kinds.emplace_back(k == ColumnKind::numeric ? "numeric" : "categorical");
    Json params = {{"classes", m_.classes},
                   {"feature_names", m_.feature_names},
                   {"feature_kinds", kinds},
                   {"criterion", m_.params.criterion == Criterion::gini ? "gini" : "entropy"},
                   {"max_depth", m_.params.max_depth ? Json(*m_.params.max_depth) : Json(nullptr)},
                   {"min_leaf", m_.params.min_leaf},
                   {"post_pruned", m_.pruning.post_pruned},
                   {"nodes", nodes}};
    return {{"type", "tree"}, {"params", params}};
  }
  static std::unique_ptr<Predictor> from_json(const Json& p) {
    TreeModel m;
    m.classes = field(p, "classes").get<std::vector<std::string>>();
    m.feature_names = field(p, "feature_names").get<std::vector<std::string>>();
    for (const auto& k : field(p, "feature_kinds"))
      m.feature_kinds.push_back(k == "numeric" ? ColumnKind::numeric : ColumnKind::categorical);
    m.params.criterion = field(p, "criterion") == "gini" ? Criterion::gini : Criterion::entropy;
    if (!field(p, "max_depth").is_null()) m.params.max_depth = p.at("max_depth").get<std::size_t>();
    m.params.min_leaf = field(p, "min_leaf").get<std::size_t>();
    m.pruning.post_pruned = p.value("post_pruned", false);
    for (const auto& n : field(p, "nodes")) {
      TreeNode t;
      t.kind = parse_kind(n.at("kind").get<std::string>());
      t.feature = n.at("feature").get<std::size_t>();
      t.threshold = n.at("threshold").get<double>();
      t.categories = n.at("categories").get<std::vector<std::string>>();
      t.children = n.at("children").get<std::vector<std::size_t>>();
      t.label = n.at("label").get<std::string>();
      t.distribution = n.at("distribution").get<std::vector<double>>();
      t.support = n.at("support").get<std::size_t>();
      t.depth = n.at("depth").get<std::size_t>();
      m.nodes.push_back(std::move(t));
    }
    return std::make_unique<TreePredictor>(std::move(m));
  }

 private:
  TreeModel m_;
};

// ---- SVM ----

Json svm_params(const SvmModel& m) {
  return {{"kernel", m.kernel.to_string()}, {"C", m.C},
          {"classes", m.classes},           {"feature_names", m.feature_names},
          {"support_vectors", matrix_json(m.support_vectors)},
          {"alpha", m.alpha},               {"y", m.y},
          {"bias", m.bias}};
}

SvmModel svm_from(const Json& p) {
  SvmModel m;
  m.kernel = Kernel::parse(field(p, "kernel").get<std::string>());
  m.C = field(p, "C").get<double>();
  m.classes = field(p, "classes").get<std::vector<std::string>>();
  m.feature_names = field(p, "feature_names").get<std::vector<std::string>>();
  m.support_vectors = matrix_from(field(p, "support_vectors"));
  m.alpha = field(p, "alpha").get<std::vector<double>>();
  m.y = field(p, "y").get<std::vector<double>>();
  m.bias = field(p, "bias").get<double>();
  return m;
}

class SvmPredictor final : public Predictor {
 public:
  explicit SvmPredictor(SvmModel m) : m_(std::move(m)) {}
  Task task() const override { return Task::classification; }
  std::vector<std::string> predict_labels(const Dataset& d) const override { return svm_predict(m_, d); }
  Json to_json() const override { return {{"type", "svm"}, {"params", svm_params(m_)}}; }
  static std::unique_ptr<Predictor> from_json(const Json& p) { return std::make_unique<SvmPredictor>(svm_from(p)); }

 private:
  SvmModel m_;
};

class SvmOvrPredictor final : public Predictor {
 public:
  explicit SvmOvrPredictor(SvmOvrModel m) : m_(std::move(m)) {}
  Task task() const override { return Task::classification; }
  std::vector<std::string> predict_labels(const Dataset& d) const override { return svm_predict(m_, d); }
  Json to_json() const override {
    Json models = Json::array();
    for (const auto& m : m_.models) models.push_back(svm_params(m));
    return {{"type", "svm_ovr"}, {"params", {{"classes", m_.classes}, {"models", models}}}};
  }
  static std::unique_ptr<Predictor> from_json(const Json& p) {
    SvmOvrModel m;
    m.classes = field(p, "classes").get<std::vector<std::string>>();
    for (const auto& j : field(p, "models")) m.models.push_back(svm_from(j));
    return std::make_unique<SvmOvrPredictor>(std::move(m));
  }

 private:
  SvmOvrModel m_;
};

// ---- OLS ----

class OlsPredictor final : public Predictor {
 public:
  explicit OlsPredictor(OlsModel m) : m_(std::move(m)) {}
  Task task() const override { return Task::regression; }
  std::vector<double> predict_values(const Dataset& d) const override { return ols_predict(m_, d); }
  Json to_json() const override {
    return {{"type", "ols"},
            {"params",
             {{"form", to_string(m_.form)},
              {"degree", m_.degree},
              {"feature_names", m_.feature_names},
              {"coefficients", m_.coefficients}}}};
  }
  static std::unique_ptr<Predictor> from_json(const Json& p) {
    OlsModel m;
    m.form = parse_ols_form(field(p, "form").get<std::string>());
    m.degree = field(p, "degree").get<std::size_t>();
    m.feature_names = field(p, "feature_names").get<std::vector<std::string>>();
    m.coefficients = field(p, "coefficients").get<std::vector<double>>();
    return std::make_unique<OlsPredictor>(std::move(m));
  }

 private:
  OlsModel m_;
};

// ---- ensembles ----

Json members_json(const std::vector<std::shared_ptr<const Predictor>>& members) {
  Json out = Json::array();
  for (const auto& m : members) out.push_back(m->to_json());
  return out;
}

std::vector<std::shared_ptr<const Predictor>> members_from(const Json& j) {
  std::vector<std::shared_ptr<const Predictor>> out;
  for (const auto& m : j) out.push_back(predictor_from_json(m));
  return out;
}

class BaggingPredictor final : public Predictor {
 public:
  explicit BaggingPredictor(BaggingModel m) : m_(std::move(m)) {}
  Task task() const override { return m_.task; }
  std::vector<std::string> predict_labels(const Dataset& d) const override { return bagging_predict_labels(m_, d); }
  std::vector<double> predict_values(const Dataset& d) const override { return bagging_predict_values(m_, d); }
  const BaggingModel& model() const { return m_; }
  Json to_json() const override {
    return {{"type", "bagging"},
            {"params",
             {{"task", m_.task == Task::regression ? "regression" : "classification"},
              {"base", m_.base.to_string()},
              {"classes", m_.classes},
              {"bags", m_.bags},
              {"members", members_json(m_.members)}}}};
  }
  static std::unique_ptr<Predictor> from_json(const Json& p) {
    BaggingModel m;
    m.task = field(p, "task") == "regression" ? Task::regression : Task::classification;
    m.base = AlgoSpec::parse(field(p, "base").get<std::string>());
    m.classes = field(p, "classes").get<std::vector<std::string>>();
    m.bags = field(p, "bags").get<std::vector<std::vector<std::size_t>>>();
    m.members = members_from(field(p, "members"));
    return std::make_unique<BaggingPredictor>(std::move(m));
  }

 private:
  BaggingModel m_;
};

class AdaBoostPredictor final : public Predictor {
 public:
  explicit AdaBoostPredictor(AdaBoostModel m) : m_(std::move(m)) {}
  Task task() const override { return Task::classification; }
  std::vector<std::string> predict_labels(const Dataset& d) const override { return adaboost_predict(m_, d); }
  Json to_json() const override {
    return {{"type", "adaboost"},
            {"params",
             {{"base", m_.base.to_string()},
              {"classes", m_.classes},
              {"betas", m_.betas},
              {"members", members_json(m_.members)}}}};
  }
  static std::unique_ptr<Predictor> from_json(const Json& p) {
    AdaBoostModel m;
    m.base = AlgoSpec::parse(field(p, "base").get<std::string>());
    m.classes = field(p, "classes").get<std::vector<std::string>>();
    m.betas = field(p, "betas").get<std::vector<double>>();
    m.members = members_from(field(p, "members"));
    return std::make_unique<AdaBoostPredictor>(std::move(m));
  }

 private:
  AdaBoostModel m_;
};

// ---- scaling wrapper ----

class ScaledPredictor final : public Predictor {
 public:
  ScaledPredictor(ScalerParams scaler, std::unique_ptr<Predictor> inner)
      : scaler_(std::move(scaler)), inner_(std::move(inner)) {}
  Task task() const override { return inner_->task(); }
  std::vector<std::string> predict_labels(const Dataset& d) const override {
    return inner_->predict_labels(apply_scaler(d, scaler_));
  }
  std::vector<double> predict_values(const Dataset& d) const override {
    return inner_->predict_values(apply_scaler(d, scaler_));
  }
  Json to_json() const override {
    Json columns = Json::array();
    for (const auto& c : scaler_.columns)
      columns.push_back({{"column", c.column}, {"center", c.center}, {"spread", c.spread}});
    return {{"type", "scaled"},
            {"params",
             {{"scaler", {{"kind", to_string(scaler_.kind)}, {"columns", columns}}}, {"model", inner_->to_json()}}}};
  }
  static std::unique_ptr<Predictor> from_json(const Json& p) {
    ScalerParams s;
    const Json& sj = field(p, "scaler");
    s.kind = parse_scale_kind(sj.at("kind").get<std::string>());
    for (const auto& c : sj.at("columns"))
      s.columns.push_back({c.at("column").get<std::string>(), c.at("center").get<double>(), c.at("spread").get<double>()});
    return std::make_unique<ScaledPredictor>(std::move(s), predictor_from_json(field(p, "model")));
  }

 private:
  ScalerParams scaler_;
  std::unique_ptr<Predictor> inner_;
};

// ---- estimator dispatch ----

bool is_name(const AlgoSpec& s, std::initializer_list<std::string_view> names) {
  return std::find(names.begin(), names.end(), s.name) != names.end();
}

std::size_t positive(const AlgoSpec& s, const std::string& key, long fallback) {
  const long v = s.integer(key, fallback);
  if (v < 1) throw Error(ErrorCode::invalid_argument, s.name + ": '" + key + "' must be >= 1");
  return static_cast<std::size_t>(v);
}

TreeParams tree_params(const AlgoSpec& s) {
  TreeParams p;
  const std::string crit = s.text("criterion", "entropy");
  if (crit == "gini") {
    p.criterion = Criterion::gini;
  } else if (crit != "entropy") {
    throw Error(ErrorCode::invalid_argument, s.name + ": criterion must be entropy or gini, got '" + crit + "'");
  }
  if (s.name == "stump") {
    p.max_depth = 1;
  } else if (s.has("max_depth")) {
    const long depth = s.integer("max_depth", 0);
    if (depth < 0) throw Error(ErrorCode::invalid_argument, "tree: max_depth must be >= 0");
    p.max_depth = static_cast<std::size_t>(depth);
  }
  p.min_leaf = positive(s, "min_leaf", 1);
  return p;
}

Kernel kernel_of(const AlgoSpec& s) {
  const std::string k = s.text("kernel", "linear");
  if (k.find(':') != std::string::npos) return Kernel::parse(k);
  AlgoSpec ks{k, {}};
  for (const char* key : {"d", "sigma", "gamma", "alpha", "c"})
    if (s.has(key)) ks.params[key] = s.params.at(key);
  return Kernel::parse(ks.to_string());
}

SvmParams svm_params_of(const AlgoSpec& s) {
  SvmParams p;
  p.C = s.real("C", 1.0);
  p.kernel = kernel_of(s);
  p.tol = s.real("tol", 1e-3);
  p.max_passes = static_cast<int>(positive(s, "max_passes", 5));
  p.max_sweeps = positive(s, "max_sweeps", 1000000);
  return p;
}

void validate(const AlgoSpec& s) {
  if (is_name(s, {"knn"})) {
    s.expect_keys({"k", "metric", "scale"});
  } else if (is_name(s, {"nb", "naive_bayes"})) {
    s.expect_keys({"smoothing", "scale"});
  } else if (is_name(s, {"tree"})) {
    s.expect_keys({"criterion", "max_depth", "min_leaf", "prune", "validation", "scale"});
  } else if (is_name(s, {"stump"})) {
    s.expect_keys({"criterion", "min_leaf", "scale"});
  } else if (is_name(s, {"svm"})) {
    s.expect_keys({"C", "kernel", "d", "sigma", "gamma", "alpha", "c", "tol", "max_passes", "max_sweeps", "scale"});
  } else if (is_name(s, {"ols"})) {
    s.expect_keys({"form", "degree", "scale"});
  } else if (is_name(s, {"bagging", "adaboost"})) {
    s.expect_keys({"base", "T", "scale"});
  } else {
    throw Error(ErrorCode::invalid_argument, "unknown algorithm '" + s.name + "'");
  }
}

AlgoSpec base_of(const AlgoSpec& s) {
  return AlgoSpec::parse(s.text("base", s.name == "adaboost" ? "stump" : "tree"));
}

std::unique_ptr<Predictor> fit_plain(const AlgoSpec& s, const Dataset& d, std::span<const double> weights,
                                     std::uint64_t seed) {
  if (!d.has_labels()) throw Error(ErrorCode::missing_labels, s.name + " needs a label column");
  if (d.n_rows() == 0) throw Error(ErrorCode::empty_dataset, s.name + " needs training rows");

  if (is_name(s, {"knn"})) {
    return std::make_unique<KnnPredictor>(
        knn_fit(d, positive(s, "k", 5), DistanceMetric::parse(s.text("metric", "euclidean"))));
  }
  if (is_name(s, {"nb", "naive_bayes"})) return std::make_unique<NbPredictor>(nb_fit(d, s.real("smoothing", 1.0)));
  if (is_name(s, {"tree", "stump"})) {
    const TreeParams p = tree_params(s);
    if (s.flag("prune", false)) {
      const double fraction = s.real("validation", 0.25);
      const Split split = train_test_split(d, fraction, seed, true);
      std::vector<double> w;
      if (!weights.empty())
        for (std::size_t r : split.indices.train) w.push_back(weights[r]);
      return std::make_unique<TreePredictor>(tree_fit(split.train, p, true, &split.test, w));
    }
    return std::make_unique<TreePredictor>(tree_fit(d, p, weights));
  }
  if (is_name(s, {"svm"})) {
    const SvmParams p = svm_params_of(s);
    const auto classes = group_by_class(d.class_labels()).classes;
    if (classes.size() > 2) return std::make_unique<SvmOvrPredictor>(svm_fit_ovr(d, p));
    return std::make_unique<SvmPredictor>(svm_fit(d, p).model);
  }
  if (is_name(s, {"ols"})) {
    const auto form = parse_ols_form(s.text("form", "multiple"));
    return std::make_unique<OlsPredictor>(ols_fit(d, form, positive(s, "degree", form == OlsForm::polynomial ? 2 : 1)));
  }
  if (is_name(s, {"bagging"})) {
    return std::make_unique<BaggingPredictor>(bagging_fit(d, Estimator(base_of(s)), positive(s, "T", 10), seed));
  }
  if (is_name(s, {"adaboost"})) {
    return std::make_unique<AdaBoostPredictor>(adaboost_fit(d, Estimator(base_of(s)), positive(s, "T", 50), seed));
  }
  throw Error(ErrorCode::invalid_argument, "unknown algorithm '" + s.name + "'");
}

bool native_weights(const AlgoSpec& s) { return is_name(s, {"tree", "stump"}) && !s.flag("prune", false); }

std::vector<std::size_t> weighted_resample(std::span<const double> weights, std::uint64_t seed) {
  std::vector<double> cumulative(weights.size());
  std::partial_sum(weights.begin(), weights.end(), cumulative.begin());
  const double total = cumulative.empty() ? 0.0 : cumulative.back();
  if (!(total > 0.0)) throw Error(ErrorCode::invalid_argument, "row weights must have a positive sum");
  Rng rng(seed);
  std::vector<std::size_t> rows(weights.size());
  for (auto& r : rows) {
    const double u = rng.uniform01() * total;
    r = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
    r = std::min(r, weights.size() - 1);
  }
  return rows;
}

}  // namespace

Estimator::Estimator(AlgoSpec spec) : spec_(std::move(spec)) {
  validate(spec_);
  if (spec_.has("scale") && spec_.text("scale", "") != "none") parse_scale_kind(spec_.text("scale", ""));
  if (is_name(spec_, {"bagging", "adaboost"})) Estimator nested(base_of(spec_));
  if (is_name(spec_, {"svm"})) svm_params_of(spec_);
  if (is_name(spec_, {"tree", "stump"})) tree_params(spec_);
  if (is_name(spec_, {"adaboost"}) && Estimator(base_of(spec_)).task() != Task::classification)
    throw Error(ErrorCode::invalid_argument, "adaboost needs a classification base learner");
}

Task Estimator::task() const {
  if (is_name(spec_, {"ols"})) return Task::regression;
  if (is_name(spec_, {"bagging"})) return Estimator(base_of(spec_)).task();
  return Task::classification;
}

bool Estimator::supports_weights() const { return native_weights(spec_); }

std::unique_ptr<Predictor> Estimator::fit(const Dataset& train, std::uint64_t seed) const {
  return fit_weighted(train, {}, seed);
}

std::unique_ptr<Predictor> Estimator::fit_weighted(const Dataset& train, std::span<const double> weights,
                                                   std::uint64_t seed) const {
  if (!weights.empty() && weights.size() != train.n_rows())
    throw Error(ErrorCode::length_mismatch, "one weight per training row is required");

  AlgoSpec inner = spec_;
  std::optional<ScalerParams> scaler;
  if (spec_.has("scale")) {
    const std::string kind = spec_.text("scale", "none");
    inner.params.erase("scale");
    if (kind != "none") scaler = fit_scaler(train, parse_scale_kind(kind));
  }
  const Dataset data = scaler ? apply_scaler(train, *scaler) : train;

  std::unique_ptr<Predictor> model;
  if (weights.empty() || native_weights(inner)) {
    model = fit_plain(inner, data, weights, seed);
  } else {
    const auto rows = weighted_resample(weights, seed);
    model = fit_plain(inner, data.select_rows(rows), {}, seed ^ 0x5DEECE66DULL);
  }
  if (scaler) return std::make_unique<ScaledPredictor>(std::move(*scaler), std::move(model));
  return model;
}

std::unique_ptr<Predictor> predictor_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("type") || !j.contains("params"))
    throw Error(ErrorCode::invalid_argument, "model JSON must have 'type' and 'params'");
  const std::string type = j.at("type").get<std::string>();
  const Json& p = j.at("params");
  if (type == "knn") return KnnPredictor::from_json(p);
  if (type == "naive_bayes") return NbPredictor::from_json(p);
  if (type == "tree") return TreePredictor::from_json(p);
  if (type == "svm") return SvmPredictor::from_json(p);
  if (type == "svm_ovr") return SvmOvrPredictor::from_json(p);
  if (type == "ols") return OlsPredictor::from_json(p);
  if (type == "bagging") return BaggingPredictor::from_json(p);
  if (type == "adaboost") return AdaBoostPredictor::from_json(p);
  if (type == "scaled") return ScaledPredictor::from_json(p);
  throw Error(ErrorCode::invalid_argument, "unknown model type '" + type + "'");
}

}  // namespace tabula
