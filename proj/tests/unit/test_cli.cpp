#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "support.hpp"
#include "tabula/cli.hpp"
#include "tabula/dataset.hpp"
#include "tabula/model.hpp"

using tabula::Json;
using tabula::test::data_path;
using tabula::test::scratch_dir;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = 0;
  Json line;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  Outcome r;
  r.code = tabula::cli::run(args, out, err);
  r.line = Json::parse(out.str());
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string data(const char* name) { return data_path(name).string(); }

/// Splits iris into train/test files under `dir`.
void split_iris(const fs::path& dir, const std::string& seed) {
  const auto r = invoke({"split", "--data", data("iris.csv"), "--label", "Class", "--out", (dir / "train.csv").string(),
                         "--test-out", (dir / "test.csv").string(), "--test-fraction", "0.25", "--stratified",
                         "--seed", seed});
  REQUIRE(r.code == 0);
}

}  // namespace

TEST_CASE("split writes both halves and a manifest") {
  const fs::path dir = scratch_dir("cli-split");
  split_iris(dir, "3");
  CHECK(tabula::load_csv(dir / "train.csv", "Class").n_rows() == 112);
  CHECK(tabula::load_csv(dir / "test.csv", "Class").n_rows() == 38);
  const Json manifest = Json::parse(slurp(dir / "train.manifest.json"));
  CHECK(manifest.at("command") == "split");
  CHECK(manifest.at("seed") == 3);
  CHECK(manifest.at("outputs").size() == 2);
  CHECK(manifest.contains("wall_time_ms"));
  CHECK(manifest.contains("version"));
  CHECK(manifest.at("inputs")[0] == data("iris.csv"));
}

TEST_CASE("train then evaluate knn on iris") {
  const fs::path dir = scratch_dir("cli-knn");
  split_iris(dir, "7");
  const std::string model = (dir / "model.json").string();
  auto t = invoke({"train", "--algo", "knn:k=5,scale=standard", "--data", (dir / "train.csv").string(), "--label",
                   "Class", "--out", model, "--seed", "1"});
  REQUIRE(t.code == 0);
  CHECK(t.line.at("status") == "ok");
  const Json saved = Json::parse(slurp(model));
  CHECK(saved.at("label") == "Class");
  CHECK(saved.contains("type"));

  auto e = invoke({"evaluate", "--model", model, "--data", (dir / "test.csv").string()});
  REQUIRE(e.code == 0);
  CHECK(e.line.at("accuracy").get<double>() >= 0.9);
  CHECK(e.line.at("rows") == 38);
  CHECK(e.line.at("report").at("per_class").size() == 3);

  auto p = invoke({"predict", "--model", model, "--data", (dir / "test.csv").string(), "--out",
                   (dir / "pred.csv").string()});
  REQUIRE(p.code == 0);
  const auto pred = tabula::load_csv(dir / "pred.csv");
  CHECK(pred.n_rows() == 38);
  CHECK(pred.feature(0).name() == "row_id");
  CHECK(pred.feature(1).name() == "prediction");
}

TEST_CASE("first-k k-means on the six points") {
  const fs::path dir = scratch_dir("cli-kmeans");
  const std::string out = (dir / "assign.csv").string();
  auto r = invoke({"cluster", "--algo", "kmeans:k=2", "--data", data("six_points.csv"), "--seed", "0", "--init",
                   "first-k", "--out", out});
  REQUIRE(r.code == 0);
  CHECK(slurp(out) == "row_id,cluster\n0,0\n1,0\n2,0\n3,0\n4,1\n5,1\n");
  CHECK(r.line.at("clusters") == 2);
  CHECK(r.line.contains("internal"));
}

TEST_CASE("hierarchical clustering from a distance matrix") {
  const fs::path dir = scratch_dir("cli-agglo");
  auto r = invoke({"cluster", "--algo", "agglo:k=2,linkage=complete", "--data", data("linkage_matrix.csv"),
                   "--distances", "--out", (dir / "a.csv").string(), "--tree-out", (dir / "tree.json").string(),
                   "--seed", "0"});
  REQUIRE(r.code == 0);
  const Json tree = Json::parse(slurp(dir / "tree.json"));
  CHECK(tree.at("tree").at("height") == 11.0);
  CHECK(tree.at("newick").get<std::string>().back() == ';');

  auto d = invoke({"cluster", "--algo", "diana:k=2", "--data", data("linkage_matrix.csv"), "--distances", "--out",
                   (dir / "d.csv").string(), "--seed", "0"});
  REQUIRE(d.code == 0);
  CHECK(slurp(dir / "d.csv") == "row_id,cluster\n0,0\n1,1\n2,0\n3,1\n4,0\n");
}

TEST_CASE("pca scores") {
  const fs::path dir = scratch_dir("cli-pca");
  auto r = invoke({"pca", "--components", "1", "--data", data("pca_example.csv"), "--out", (dir / "s.csv").string()});
  REQUIRE(r.code == 0);
  const auto scores = tabula::load_csv(dir / "s.csv");
  CHECK(scores.n_rows() == 4);
  CHECK(std::abs(scores.feature(0).numeric()[0]) == doctest::Approx(4.3052).epsilon(1e-4));
}

TEST_CASE("knn error curve") {
  const fs::path dir = scratch_dir("cli-curve");
  auto r = invoke({"knn-curve", "--data", data("iris.csv"), "--label", "Class", "--k-min", "1", "--k-max", "29",
                   "--stratified", "--seed", "4", "--out", (dir / "c.csv").string()});
  REQUIRE(r.code == 0);
  const auto curve = tabula::load_csv(dir / "c.csv");
  REQUIRE(curve.n_rows() == 29);
  for (double e : curve.feature(1).numeric()) CHECK((e >= 0.0 && e <= 1.0));

  auto one = invoke({"knn-curve", "--data", data("iris.csv"), "--label", "Class", "--k-min", "3", "--k-max", "3",
                     "--seed", "4", "--out", (dir / "one.csv").string()});
  REQUIRE(one.code == 0);
  CHECK(tabula::load_csv(dir / "one.csv").n_rows() == 1);

  auto bad = invoke({"knn-curve", "--data", data("iris.csv"), "--label", "Class", "--k-min", "1", "--k-max", "500",
                     "--seed", "4", "--out", (dir / "bad.csv").string()});
  CHECK(bad.code == tabula::cli::kExitUsage);
  CHECK(bad.line.at("error") == "KRangeInvalid");
  CHECK_FALSE(fs::exists(dir / "bad.csv"));
}

TEST_CASE("cv and gridsearch summaries") {
  const fs::path dir = scratch_dir("cli-cv");
  auto cv = invoke({"cv", "--algo", "nb", "--data", data("iris.csv"), "--label", "Class", "--folds", "5",
                    "--stratified", "--seed", "2", "--out", (dir / "cv.json").string()});
  REQUIRE(cv.code == 0);
  CHECK(cv.line.at("fold_scores").size() == 5);
  CHECK(cv.line.at("mean").get<double>() > 0.9);

  auto grid = invoke({"gridsearch", "--algo", "knn", "--space", "k=1,5,9", "--data", data("iris.csv"), "--label",
                      "Class", "--folds", "3", "--seed", "2", "--out", (dir / "grid.json").string()});
  REQUIRE(grid.code == 0);
  CHECK(grid.line.at("evaluated") == 3);
}

TEST_CASE("replaying a manifest reproduces the outputs byte for byte") {
  const fs::path dir = scratch_dir("cli-replay");
  const std::string model = (dir / "bag.json").string();
  auto t = invoke({"train", "--algo", "bagging:base=[tree:max_depth=2],T=7", "--data", data("iris.csv"), "--label",
                   "Class", "--out", model});
  REQUIRE(t.code == 0);
  CHECK(t.line.contains("seed"));
  const std::string first = slurp(model);
  const Json manifest = Json::parse(slurp(dir / "bag.manifest.json"));
  CHECK(manifest.at("args").back() == std::to_string(t.line.at("seed").get<std::uint64_t>()));

  fs::remove(model);
  auto again = invoke({"replay", "--manifest", (dir / "bag.manifest.json").string()});
  REQUIRE(again.code == 0);
  CHECK(slurp(model) == first);

  split_iris(dir, "11");
  const std::string train = slurp(dir / "train.csv"), test = slurp(dir / "test.csv");
  REQUIRE(invoke({"replay", "--manifest", (dir / "train.manifest.json").string()}).code == 0);
  CHECK(slurp(dir / "train.csv") == train);
  CHECK(slurp(dir / "test.csv") == test);
}

TEST_CASE("inputs are left untouched") {
  const std::string before = slurp(data_path("iris.csv"));
  const fs::path dir = scratch_dir("cli-inputs");
  invoke({"scale", "--data", data("iris.csv"), "--label", "Class", "--kind", "standard", "--out",
          (dir / "s.csv").string()});
  CHECK(slurp(data_path("iris.csv")) == before);
}

TEST_CASE("exit codes classify failures") {
  const fs::path dir = scratch_dir("cli-errors");
  auto usage = invoke({"train", "--data", data("iris.csv")});
  CHECK(usage.code == tabula::cli::kExitUsage);
  CHECK(usage.line.at("status") == "error");
  CHECK_FALSE(usage.err.empty());

  CHECK(invoke({"frobnicate"}).code == tabula::cli::kExitUsage);
  CHECK(invoke({"train", "--algo", "knn:q=1", "--data", data("iris.csv"), "--label", "Class", "--out",
                (dir / "m.json").string(), "--seed", "1"})
            .code == tabula::cli::kExitUsage);

  auto missing = invoke({"train", "--algo", "knn", "--data", (dir / "nope.csv").string(), "--label", "Class",
                         "--out", (dir / "m.json").string(), "--seed", "1"});
  CHECK(missing.code == tabula::cli::kExitData);
  CHECK(missing.line.at("error") == "IoFailure");

  auto numeric = invoke({"train", "--algo", "svm:C=1000,kernel=linear,max_sweeps=2", "--data", data("iris.csv"),
                         "--label", "Class", "--out", (dir / "m.json").string(), "--seed", "1"});
  CHECK(numeric.code == tabula::cli::kExitNumeric);
  CHECK(numeric.line.at("error") == "NoConvergence");
  CHECK_FALSE(fs::exists(dir / "m.json"));
  CHECK_FALSE(fs::exists(dir / "m.manifest.json"));
}

TEST_CASE("atomic writes and manifest naming") {
  const fs::path dir = scratch_dir("cli-atomic");
  tabula::cli::write_atomic(dir / "x.txt", "hello");
  CHECK(slurp(dir / "x.txt") == "hello");
  tabula::cli::write_atomic(dir / "x.txt", "again");
  CHECK(slurp(dir / "x.txt") == "again");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++files;
  CHECK(files == 1);
  CHECK(tabula::cli::manifest_path("out/model.json") == fs::path("out/model.manifest.json"));
}

TEST_CASE("the installed binary prints one JSON line") {
  const char* exe = std::getenv("TABULA_CLI");
  if (exe == nullptr) {
    MESSAGE("TABULA_CLI not set; skipping process-level check");
    return;
  }
  const fs::path dir = scratch_dir("cli-process");
  const std::string cmd = std::string(exe) + " pca --components 1 --data " + data("pca_example.csv") + " --out " +
                          (dir / "s.csv").string() + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string text;
  std::array<char, 256> buf{};
  while (fgets(buf.data(), buf.size(), pipe) != nullptr) text += buf.data();
  const int status = pclose(pipe);
  CHECK(WEXITSTATUS(status) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 1);
  CHECK(Json::parse(text).at("status") == "ok");

  const int bad = std::system((std::string(exe) + " pca --data /nonexistent.csv --out /tmp/x.csv >/dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(bad) == tabula::cli::kExitData);
}
