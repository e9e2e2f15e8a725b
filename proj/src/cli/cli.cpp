#include "tabula/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "tabula/clustering.hpp"
#include "tabula/decomposition.hpp"
#include "tabula/error.hpp"
#include "tabula/evaluation.hpp"
#include "tabula/supervised/knn.hpp"

#ifndef TABULA_VERSION
#define TABULA_VERSION "dev"
#endif

namespace tabula::cli {

namespace fs = std::filesystem;

fs::path manifest_path(const fs::path& primary) {
  fs::path p = primary;
  return p.replace_filename(primary.stem().string() + ".manifest.json");
}

void write_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp-" + std::to_string(std::hash<std::string>{}(path.string() + content) & 0xFFFFFF);
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::io_failure, "cannot write '" + tmp.string() + "'");
    f << content;
    f.flush();
    if (!f) throw Error(ErrorCode::io_failure, "write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::io_failure, "cannot move output into '" + path.string() + "'");
  }
}

namespace {

// Everything a command produces. Files are held in memory and written only
// after the command has succeeded.
struct Run {
  std::string command;
  std::vector<std::string> args;
  Json flags = Json::object();
  std::optional<std::uint64_t> seed;
  std::vector<std::string> inputs;
  std::vector<std::pair<fs::path, std::string>> files;
  Json summary = Json::object();

  void emit(const fs::path& path, std::string content) { files.emplace_back(path, std::move(content)); }
};

struct Options {
  std::string data, label, model, out, algo, metric, space, kind = "standard", init, apply, distance = "euclidean";
  std::string test_out, params_out, tree_out, model_out, manifest, scale = "none";
  std::uint64_t seed = 0;
  double test_fraction = 0.25;
  std::size_t folds = 5, components = 1, k_min = 1, k_max = 29, random = 0;
  bool stratified = false, distances = false;
};

std::string read_text(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw Error(ErrorCode::io_failure, "cannot read '" + p.string() + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

Json read_json(const fs::path& p) {
  try {
    return Json::parse(read_text(p));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::io_failure, "'" + p.string() + "' is not valid JSON: " + e.what());
  }
}

std::optional<std::string> label_opt(const std::string& label) {
  return label.empty() ? std::nullopt : std::optional<std::string>(label);
}

Dataset load(Run& run, const std::string& path, const std::string& label) {
  run.inputs.push_back(path);
  return load_csv(path, label_opt(label));
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string column_csv(const std::string& header, const std::vector<std::string>& values) {
  std::string out = "row_id," + header + "\n";
  for (std::size_t i = 0; i < values.size(); ++i) out += std::to_string(i) + "," + values[i] + "\n";
  return out;
}

// ---- commands ----

void cmd_split(Run& run, const Options& o) {
  const Dataset d = load(run, o.data, o.label);
  const Split s = train_test_split(d, o.test_fraction, *run.seed, o.stratified);
  run.emit(o.out, to_csv(s.train));
  run.emit(o.test_out, to_csv(s.test));
  run.summary["train_rows"] = s.train.n_rows();
  run.summary["test_rows"] = s.test.n_rows();
}

Json scaler_json(const ScalerParams& p) {
  Json cols = Json::array();
  for (const auto& c : p.columns) cols.push_back({{"column", c.column}, {"center", c.center}, {"spread", c.spread}});
  return {{"kind", to_string(p.kind)}, {"columns", cols}};
}

ScalerParams scaler_from(const Json& j) {
  ScalerParams p;
  p.kind = parse_scale_kind(j.at("kind").get<std::string>());
  for (const auto& c : j.at("columns"))
    p.columns.push_back({c.at("column").get<std::string>(), c.at("center").get<double>(), c.at("spread").get<double>()});
  return p;
}

void cmd_scale(Run& run, const Options& o) {
  const Dataset d = load(run, o.data, o.label);
  ScalerParams p;
  if (!o.apply.empty()) {
    run.inputs.push_back(o.apply);
    try {
      p = scaler_from(read_json(o.apply));
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::io_failure, "'" + o.apply + "' is not a scaler file: " + e.what());
    }
  } else {
    p = fit_scaler(d, parse_scale_kind(o.kind));
  }
  run.emit(o.out, to_csv(apply_scaler(d, p)));
  if (!o.params_out.empty()) run.emit(o.params_out, dump(scaler_json(p)));
  run.summary["kind"] = to_string(p.kind);
  run.summary["columns"] = p.columns.size();
  run.summary["rows"] = d.n_rows();
}

void cmd_train(Run& run, const Options& o) {
  const Estimator est(AlgoSpec::parse(o.algo));
  if (o.label.empty()) throw Error(ErrorCode::invalid_argument, "--label is required for train");
  const Dataset d = load(run, o.data, o.label);
  const auto model = est.fit(d, *run.seed);
  Json file = model->to_json();
  file["algo"] = est.spec().to_string();
  file["label"] = o.label;
  run.emit(o.out, dump(file));
  run.summary["algo"] = est.spec().to_string();
  run.summary["rows"] = d.n_rows();
  run.summary["task"] = est.task() == Task::regression ? "regression" : "classification";
}

struct LoadedModel {
  std::unique_ptr<Predictor> predictor;
  std::string label;
};

LoadedModel load_model(Run& run, const std::string& path) {
  run.inputs.push_back(path);
  const Json j = read_json(path);
  try {
    return {predictor_from_json(j), j.value("label", std::string())};
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::io_failure, "'" + path + "' is not a model file: " + e.what());
  }
}

void cmd_predict(Run& run, const Options& o) {
  const LoadedModel m = load_model(run, o.model);
  const std::string label = o.label.empty() ? m.label : o.label;
  run.inputs.push_back(o.data);
  const Dataset raw = parse_csv(read_text(o.data));
  const bool has_label = !label.empty() && raw.find_feature(label).has_value();
  const Dataset d = has_label ? load_csv(o.data, label) : raw;
  std::vector<std::string> cells;
  if (m.predictor->task() == Task::regression) {
    for (double v : m.predictor->predict_values(d)) cells.push_back(format_real(v));
  } else {
    cells = m.predictor->predict_labels(d);
  }
  run.emit(o.out, column_csv("prediction", cells));
  run.summary["rows"] = cells.size();
}

void cmd_evaluate(Run& run, const Options& o) {
  const LoadedModel m = load_model(run, o.model);
  const std::string label = o.label.empty() ? m.label : o.label;
  if (label.empty()) throw Error(ErrorCode::invalid_argument, "--label is required: the model does not record one");
  const Dataset d = load(run, o.data, label);
  Json report;
  if (m.predictor->task() == Task::regression) {
    const auto pred = m.predictor->predict_values(d);
    const auto truth = d.targets();
    report = {{"mse", mse(truth, pred)}, {"rows", d.n_rows()}};
    run.summary["mse"] = report["mse"];
  } else {
    const auto pred = m.predictor->predict_labels(d);
    const auto truth = d.class_labels();
    const ConfusionMatrix cm = ConfusionMatrix::from_labels(truth, pred);
    report = to_json(classification_report(cm));
    report["confusion_matrix"] = to_json(cm);
    report["rows"] = d.n_rows();
    run.summary["accuracy"] = accuracy(cm);
    run.summary["error"] = error_rate(cm);
    run.summary["report"] = report;
  }
  run.summary["rows"] = d.n_rows();
  if (!o.out.empty()) run.emit(o.out, dump(report));
}

ScoreMetric metric_for(const Options& o, const Estimator& est) {
  if (!o.metric.empty()) return parse_score_metric(o.metric);
  return est.task() == Task::regression ? ScoreMetric::mse : ScoreMetric::accuracy;
}

void cmd_cv(Run& run, const Options& o) {
  const Estimator est(AlgoSpec::parse(o.algo));
  const ScoreMetric metric = metric_for(o, est);
  const Dataset d = load(run, o.data, o.label);
  const FoldPlan plan = k_fold(d, o.folds, o.stratified, *run.seed);
  const CvResult cv = cross_validate(d, plan, est, metric);
  const Json result = {{"algo", est.spec().to_string()},
                       {"metric", to_string(metric)},
                       {"folds", plan.k()},
                       {"stratified", o.stratified},
                       {"fold_scores", cv.fold_scores},
                       {"mean", cv.mean}};
  if (!o.out.empty()) run.emit(o.out, dump(result));
  run.summary["mean"] = cv.mean;
  run.summary["fold_scores"] = cv.fold_scores;
  run.summary["metric"] = to_string(metric);
}

void cmd_gridsearch(Run& run, const Options& o) {
  const AlgoSpec base = AlgoSpec::parse(o.algo);
  const Estimator est(base);
  const ScoreMetric metric = metric_for(o, est);
  const SearchSpace space = SearchSpace::parse(o.space, o.random > 0 ? SearchMode::random : SearchMode::grid, o.random,
                                               *run.seed);
  const Dataset d = load(run, o.data, o.label);
  const FoldPlan plan = k_fold(d, o.folds, o.stratified, *run.seed);
  const SearchResult r =
      o.random > 0 ? random_search(d, space, base, plan, metric) : grid_search(d, space, base, plan, metric);
  if (!o.out.empty()) run.emit(o.out, dump(to_json(r, metric)));
  run.summary["best"] = r.best;
  run.summary["best_score"] = r.best_score;
  run.summary["evaluated"] = r.table.size();
  run.summary["metric"] = to_string(metric);
}

std::string assignment_csv(const ClusterAssignment& a) {
  std::string out = "row_id,cluster\n";
  for (std::size_t i = 0; i < a.size(); ++i) out += std::to_string(i) + "," + std::to_string(a.ids[i]) + "\n";
  return out;
}

void cmd_cluster(Run& run, const Options& o) {
  const AlgoSpec spec = AlgoSpec::parse(o.algo);
  const Dataset d = load(run, o.data, o.label);
  const Matrix x = d.numeric_matrix();
  const auto names = d.feature_names();

  ClusterAssignment assignment;
  Json model;
  std::optional<Dendrogram> tree;

  if (spec.name == "kmeans") {
    spec.expect_keys({"k", "max_iter", "tol", "init"});
    KMeansOptions ko;
    ko.k = static_cast<std::size_t>(spec.integer("k", 2));
    ko.max_iter = static_cast<std::size_t>(spec.integer("max_iter", 300));
    ko.tol = spec.real("tol", 0.0);
    const std::string init = o.init.empty() ? spec.text("init", "first-k") : o.init;
    if (init == "random") {
      ko.init = KMeansInit::seeded_random;
    } else if (init != "first-k") {
      throw Error(ErrorCode::invalid_argument, "--init must be first-k or random, got '" + init + "'");
    }
    ko.seed = *run.seed;
    KMeansResult r = kmeans(x, ko);
    Json centers = Json::array();
    for (std::size_t c = 0; c < r.model.centers.rows(); ++c)
      centers.push_back(std::vector<double>(r.model.centers.row(c).begin(), r.model.centers.row(c).end()));
    model = {{"centers", centers},
             {"objective", r.model.objective},
             {"iterations", r.model.iterations},
             {"converged", r.model.converged}};
    assignment = std::move(r.assignment);
  } else if (spec.name == "gmm") {
    spec.expect_keys({"k", "max_iter", "tol", "ridge"});
    GmmOptions go;
    go.k = static_cast<std::size_t>(spec.integer("k", 2));
    go.max_iter = static_cast<std::size_t>(spec.integer("max_iter", 200));
    go.tol = spec.real("tol", 1e-8);
    go.ridge = spec.flag("ridge", true);
    go.seed = *run.seed;
    GmmResult r = gmm_em(x, go);
    Json covs = Json::array();
    for (const auto& c : r.model.covariances) {
      Json rows = Json::array();
      for (std::size_t i = 0; i < c.rows(); ++i) rows.push_back(std::vector<double>(c.row(i).begin(), c.row(i).end()));
      covs.push_back(rows);
    }
    Json means = Json::array();
    for (std::size_t c = 0; c < r.model.means.rows(); ++c)
      means.push_back(std::vector<double>(r.model.means.row(c).begin(), r.model.means.row(c).end()));
    model = {{"weights", r.model.weights},
             {"means", means},
             {"covariances", covs},
             {"log_likelihood", r.model.log_likelihood},
             {"iterations", r.model.iterations},
             {"converged", r.model.converged}};
    assignment = std::move(r.assignment);
  } else if (spec.name == "agglo" || spec.name == "diana") {
    spec.expect_keys({"k", "linkage", "metric"});
    const Matrix dist = o.distances ? x : pairwise_distances(x, DistanceMetric::parse(spec.text("metric", "euclidean")));
    if (spec.name == "agglo") {
      tree = agglomerative(dist, parse_linkage(spec.text("linkage", "single")));
    } else {
      tree = diana(dist).tree;
    }
    assignment = tree->cut(static_cast<std::size_t>(spec.integer("k", 2)));
  } else if (spec.name == "dbscan") {
    spec.expect_keys({"eps", "min_pts", "metric"});
    const long min_pts = spec.integer("min_pts", 5);
    if (min_pts < 1) throw Error(ErrorCode::invalid_argument, "dbscan: min_pts must be >= 1");
    DbscanResult r = dbscan(x, spec.real("eps", 0.5), static_cast<std::size_t>(min_pts),
                            DistanceMetric::parse(spec.text("metric", "euclidean")));
    std::vector<std::string> roles;
    for (auto role : r.roles) roles.emplace_back(to_string(role));
    model = {{"core_points", r.core_points}, {"roles", roles}, {"noise", r.assignment.noise_count()}};
    assignment = std::move(r.assignment);
  } else {
    throw Error(ErrorCode::invalid_argument, "unknown clustering algorithm '" + spec.name + "'");
  }

  run.emit(o.out, assignment_csv(assignment));
  if (tree && !o.tree_out.empty()) {
    const std::vector<std::string> leaf_names = o.distances ? names : std::vector<std::string>{};
    run.emit(o.tree_out, dump({{"tree", to_json(*tree, leaf_names)}, {"newick", to_newick(*tree, leaf_names)}}));
  }
  if (!model.is_null() && !o.model_out.empty()) run.emit(o.model_out, dump(model));

  run.summary["algo"] = spec.to_string();
  run.summary["clusters"] = assignment.k;
  run.summary["noise"] = assignment.noise_count();
  if (!o.distances && assignment.k >= 2) run.summary["internal"] = to_json(internal_indices(x, assignment));
  if (d.has_labels()) {
    const auto groups = group_by_class(d.class_labels());
    std::vector<int> ref(d.n_rows());
    for (std::size_t c = 0; c < groups.rows.size(); ++c)
      for (std::size_t r : groups.rows[c]) ref[r] = static_cast<int>(c);
    run.summary["external"] = to_json(external_indices(assignment, ClusterAssignment::compact(ref)));
  }
}

void cmd_pca(Run& run, const Options& o) {
  const Dataset d = load(run, o.data, o.label);
  const PcaModel m = pca_fit(d, o.components);
  const Matrix scores = pca_transform(m, d.numeric_matrix(m.feature_names));
  std::vector<std::string> names;
  for (std::size_t c = 0; c < m.retained; ++c) names.push_back("pc" + std::to_string(c + 1));
  run.emit(o.out, to_csv(dataset_from_matrix(scores, names)));
  if (!o.model_out.empty()) {
    Json comps = Json::array();
    for (std::size_t c = 0; c < m.components.rows(); ++c)
      comps.push_back(std::vector<double>(m.components.row(c).begin(), m.components.row(c).end()));
    run.emit(o.model_out, dump({{"feature_names", m.feature_names},
                                {"means", m.means},
                                {"eigenvalues", m.eigenvalues},
                                {"components", comps},
                                {"retained", m.retained}}));
  }
  run.summary["eigenvalues"] = m.eigenvalues;
  run.summary["explained_variance_ratio"] = m.explained_variance_ratio();
  run.summary["rows"] = scores.rows();
}

void cmd_knn_curve(Run& run, const Options& o) {
  if (o.label.empty()) throw Error(ErrorCode::invalid_argument, "--label is required for knn-curve");
  const DistanceMetric metric = DistanceMetric::parse(o.distance);
  const Dataset d = load(run, o.data, o.label);
  Split s = train_test_split(d, o.test_fraction, *run.seed, o.stratified);
  if (o.scale != "none") {
    const ScalerParams p = fit_scaler(s.train, parse_scale_kind(o.scale));
    s.train = apply_scaler(s.train, p);
    s.test = apply_scaler(s.test, p);
  }
  const auto curve = knn_error_curve(s.train, s.test, o.k_min, o.k_max, metric);
  std::string csv = "k,mean_error\n";
  for (const auto& p : curve) csv += std::to_string(p.k) + "," + format_real(p.mean_error) + "\n";
  run.emit(o.out, csv);
  const auto best = std::min_element(curve.begin(), curve.end(),
                                     [](const auto& a, const auto& b) { return a.mean_error < b.mean_error; });
  run.summary["points"] = curve.size();
  run.summary["best_k"] = best->k;
  run.summary["best_error"] = best->mean_error;
}

int exit_code(ErrorClass c) {
  switch (c) {
    case ErrorClass::usage:
      return kExitUsage;
    case ErrorClass::data:
      return kExitData;
    case ErrorClass::numeric:
      return kExitNumeric;
  }
  return kExitData;
}

void fail_line(std::ostream& out, const std::string& command, std::string_view code, const std::string& message) {
  out << Json{{"command", command}, {"status", "error"}, {"error", code}, {"message", message}}.dump() << '\n';
}

Json parsed_flags(const CLI::App& sub) {
  Json flags = Json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->count() == 0 || opt->get_name() == "--help") continue;
    const auto& results = opt->results();
    const std::string name = opt->get_name().substr(opt->get_name().find_first_not_of('-'));
    if (opt->get_type_size() == 0) {
      flags[name] = true;
    } else {
      flags[name] = results.size() == 1 ? Json(results.front()) : Json(results);
    }
  }
  return flags;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  Options o;
  CLI::App app{"Classical machine-learning toolkit", "tabula"};
  app.require_subcommand(1);
  app.set_version_flag("--version", TABULA_VERSION);

  auto data = [&](CLI::App* s, bool required = true) {
    auto* opt = s->add_option("--data", o.data, "Input CSV");
    if (required) opt->required();
  };
  auto label = [&](CLI::App* s) { s->add_option("--label", o.label, "Label column"); };
  auto out_opt = [&](CLI::App* s, bool required, const std::string& what) {
    auto* opt = s->add_option("--out", o.out, what);
    if (required) opt->required();
  };
  auto seed = [&](CLI::App* s) { return s->add_option("--seed", o.seed, "Random seed"); };

  std::map<std::string, CLI::Option*> seed_opts;

  auto* split = app.add_subcommand("split", "Hold-out train/test split");
  data(split);
  label(split);
  out_opt(split, true, "Training CSV");
  split->add_option("--test-out", o.test_out, "Test CSV")->required();
  split->add_option("--test-fraction", o.test_fraction, "Fraction of rows in the test set");
  split->add_flag("--stratified", o.stratified, "Preserve class proportions");
  seed_opts["split"] = seed(split);

  auto* scale = app.add_subcommand("scale", "Standardise or min-max scale numeric columns");
  data(scale);
  label(scale);
  out_opt(scale, true, "Scaled CSV");
  scale->add_option("--kind", o.kind, "standard or minmax");
  scale->add_option("--params-out", o.params_out, "Write fitted scaler JSON");
  scale->add_option("--apply", o.apply, "Apply a previously fitted scaler JSON");

  auto* train = app.add_subcommand("train", "Fit a model");
  train->add_option("--algo", o.algo, "Algorithm spec, e.g. knn:k=5,scale=standard")->required();
  data(train);
  label(train);
  out_opt(train, true, "Model JSON");
  seed_opts["train"] = seed(train);

  auto* predict = app.add_subcommand("predict", "Predict with a saved model");
  predict->add_option("--model", o.model, "Model JSON")->required();
  data(predict);
  label(predict);
  out_opt(predict, true, "Predictions CSV");

  auto* evaluate = app.add_subcommand("evaluate", "Score a saved model on labelled data");
  evaluate->add_option("--model", o.model, "Model JSON")->required();
  data(evaluate);
  label(evaluate);
  out_opt(evaluate, false, "Report JSON");

  auto* cv = app.add_subcommand("cv", "k-fold cross-validation");
  cv->add_option("--algo", o.algo, "Algorithm spec")->required();
  data(cv);
  label(cv);
  out_opt(cv, false, "Result JSON");
  cv->add_option("--folds", o.folds, "Number of folds");
  cv->add_flag("--stratified", o.stratified, "Stratified folds");
  cv->add_option("--metric", o.metric, "accuracy, error, f1_macro or mse");
  seed_opts["cv"] = seed(cv);

  auto* grid = app.add_subcommand("gridsearch", "Hyperparameter search with cross-validation");
  grid->add_option("--algo", o.algo, "Base algorithm spec")->required();
  grid->add_option("--space", o.space, "Search space, e.g. k=1,3,5;scale=standard,minmax")->required();
  data(grid);
  label(grid);
  out_opt(grid, false, "Result JSON");
  grid->add_option("--folds", o.folds, "Number of folds");
  grid->add_flag("--stratified", o.stratified, "Stratified folds");
  grid->add_option("--metric", o.metric, "accuracy, error, f1_macro or mse");
  grid->add_option("--random", o.random, "Sample this many configurations instead of the full grid");
  seed_opts["gridsearch"] = seed(grid);

  auto* cluster = app.add_subcommand("cluster", "Cluster rows");
  cluster->add_option("--algo", o.algo, "kmeans|gmm|agglo|diana|dbscan spec")->required();
  data(cluster);
  label(cluster);
  out_opt(cluster, true, "Assignment CSV");
  cluster->add_option("--init", o.init, "k-means init: first-k or random");
  cluster->add_flag("--distances", o.distances, "Treat the input as a pairwise distance matrix");
  cluster->add_option("--tree-out", o.tree_out, "Dendrogram JSON");
  cluster->add_option("--model-out", o.model_out, "Fitted parameters JSON");
  seed_opts["cluster"] = seed(cluster);

  auto* pca = app.add_subcommand("pca", "Principal component scores");
  data(pca);
  label(pca);
  out_opt(pca, true, "Scores CSV");
  pca->add_option("--components", o.components, "Components to keep");
  pca->add_option("--model-out", o.model_out, "Fitted PCA JSON");

  auto* curve = app.add_subcommand("knn-curve", "KNN test error for a range of k");
  data(curve);
  label(curve);
  out_opt(curve, true, "Curve CSV");
  curve->add_option("--k-min", o.k_min, "Smallest k");
  curve->add_option("--k-max", o.k_max, "Largest k");
  curve->add_option("--test-fraction", o.test_fraction, "Fraction of rows in the test set");
  curve->add_flag("--stratified", o.stratified, "Stratified split");
  curve->add_option("--distance", o.distance, "Distance metric");
  curve->add_option("--scale", o.scale, "none, standard or minmax");
  seed_opts["knn-curve"] = seed(curve);

  auto* replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay->add_option("--manifest", o.manifest, "Manifest JSON")->required();

  std::string command = "tabula";
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    err << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << Json{{"version", TABULA_VERSION}}.dump() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    fail_line(out, command, "UsageError", e.what());
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  command = sub->get_name();
  try {
    if (command == "replay") {
      const Json m = read_json(o.manifest);
      if (!m.contains("args") || !m.at("args").is_array())
        throw Error(ErrorCode::io_failure, "'" + o.manifest + "' has no recorded args");
      const auto recorded = m.at("args").get<std::vector<std::string>>();
      if (!recorded.empty() && recorded.front() == "replay")
        throw Error(ErrorCode::invalid_argument, "a manifest cannot replay another replay");
      return run(recorded, out, err);
    }

    Run r;
    r.command = command;
    r.args = args;
    if (auto it = seed_opts.find(command); it != seed_opts.end()) {
      if (it->second->count() == 0) {
        std::random_device rd;
        o.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
        r.args.push_back("--seed");
        r.args.push_back(std::to_string(o.seed));
      }
      r.seed = o.seed;
    }
    r.flags = parsed_flags(*sub);
    if (r.seed) r.flags["seed"] = std::to_string(*r.seed);

    if (command == "split") cmd_split(r, o);
    else if (command == "scale") cmd_scale(r, o);
    else if (command == "train") cmd_train(r, o);
    else if (command == "predict") cmd_predict(r, o);
    else if (command == "evaluate") cmd_evaluate(r, o);
    else if (command == "cv") cmd_cv(r, o);
    else if (command == "gridsearch") cmd_gridsearch(r, o);
    else if (command == "cluster") cmd_cluster(r, o);
    else if (command == "pca") cmd_pca(r, o);
    else if (command == "knn-curve") cmd_knn_curve(r, o);

    std::vector<std::string> outputs;
    for (const auto& [path, content] : r.files) {
      write_atomic(path, content);
      outputs.push_back(path.string());
    }
    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    if (!r.files.empty()) {
      const Json manifest = {{"command", command},
                             {"args", r.args},
                             {"flags", r.flags},
                             {"seed", r.seed ? Json(*r.seed) : Json(nullptr)},
                             {"inputs", r.inputs},
                             {"outputs", outputs},
                             {"wall_time_ms", wall_ms},
                             {"version", TABULA_VERSION}};
      write_atomic(manifest_path(r.files.front().first), dump(manifest));
    }
    Json line = r.summary;
    line["command"] = command;
    line["status"] = "ok";
    line["outputs"] = outputs;
    if (r.seed) line["seed"] = *r.seed;
    out << line.dump() << '\n';
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    fail_line(out, command, to_string(e.code()), e.what());
    return exit_code(e.error_class());
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << '\n';
    fail_line(out, command, "InvalidJson", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    fail_line(out, command, "Failure", e.what());
    return kExitData;
  }
}

}  // namespace tabula::cli
