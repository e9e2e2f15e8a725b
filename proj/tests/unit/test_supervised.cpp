#include <cmath>
#include <numeric>

#include "support.hpp"
#include "tabula/error.hpp"
#include "tabula/evaluation.hpp"
#include "tabula/supervised/knn.hpp"
#include "tabula/supervised/naive_bayes.hpp"
#include "tabula/supervised/ols.hpp"
#include "tabula/supervised/tree.hpp"

using namespace tabula;
using tabula::test::data_path;

namespace {

Dataset iris() { return load_csv(data_path("iris.csv"), "Class"); }
Dataset watermelon() { return load_csv(data_path("watermelon_ripe.csv"), "ripe"); }

/// The watermelon test melon T1.
Dataset melon_t1() {
  return parse_csv(
      "color,root,sound,texture,umbilicus,surface,density,sugar\n"
      "green,curly,muffled,clear,hollow,hard,0.697,0.460\n");
}

Dataset line_data(std::vector<double> x, std::vector<std::string> y) {
  return Dataset({Column("x", std::move(x))}, Column("y", std::move(y)));
}

}  // namespace

TEST_SUITE("knn") {
  TEST_CASE("majority among three neighbours") {
    const auto m = knn_fit(line_data({0, 1, 10}, {"A", "A", "B"}), 3);
    const std::vector<double> q{0.4};
    CHECK(knn_predict_row(m, q) == "A");
  }

  TEST_CASE("k=1 recovers the training labels") {
    const Dataset d = iris();
    const auto m = knn_fit(d, 1);
    const auto labels = d.class_labels();
    const Matrix x = d.numeric_matrix();
    // Iris contains duplicate rows, so only check rows whose features are unique.
    std::size_t checked = 0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
      bool unique = true;
      for (std::size_t j = 0; j < x.rows() && unique; ++j)
        if (j != i && std::equal(x.row(i).begin(), x.row(i).end(), x.row(j).begin())) unique = false;
      if (!unique) continue;
      CHECK(knn_predict_row(m, x.row(i)) == labels[i]);
      ++checked;
    }
    CHECK(checked > 140);
  }

  TEST_CASE("vote ties go to the smaller summed distance then label order") {
    const auto near_b = knn_fit(line_data({-2, 1}, {"A", "B"}), 2);
    CHECK(knn_predict_row(near_b, std::vector<double>{0}) == "B");
    const auto even = knn_fit(line_data({-1, 1}, {"B", "A"}), 2);
    CHECK(knn_predict_row(even, std::vector<double>{0}) == "A");
  }

  TEST_CASE("distance ties keep the lower training index") {
    const auto m = knn_fit(line_data({-1, 1, 1}, {"A", "B", "B"}), 1);
    CHECK(knn_predict_row(m, std::vector<double>{0}) == "A");
  }

  TEST_CASE("standardized iris hold-out") {
    const Dataset d = iris();
    const Split s = train_test_split(d, 0.25, 7, true);
    const ScalerParams p = fit_scaler(s.train, ScaleKind::standardize);
    const auto m = knn_fit(apply_scaler(s.train, p), 5);
    const Dataset test = apply_scaler(s.test, p);
    const auto cm = ConfusionMatrix::from_labels(test.class_labels(), knn_predict(m, test));
    CHECK(accuracy(cm) >= 0.90);
  }

  TEST_CASE("error curve agrees with direct prediction") {
    const Dataset d = iris();
    const Split s = train_test_split(d, 0.3, 11, true);
    const auto curve = knn_error_curve(s.train, s.test, 1, 15);
    REQUIRE(curve.size() == 15);
    for (const auto& pt : curve) {
      const auto m = knn_fit(s.train, pt.k);
      const auto cm = ConfusionMatrix::from_labels(s.test.class_labels(), knn_predict(m, s.test));
      CHECK(pt.mean_error == doctest::Approx(error_rate(cm)));
    }
  }

  TEST_CASE("knn errors") {
    CHECK_ERROR_CODE(knn_fit(line_data({0, 1}, {"A", "B"}), 3), ErrorCode::k_exceeds_data);
    CHECK_ERROR_CODE(knn_fit(watermelon(), 1), ErrorCode::non_numeric_feature);
  }
}

TEST_SUITE("naive_bayes") {
  TEST_CASE("watermelon priors and T1 decision without smoothing") {
    const auto m = nb_fit(watermelon(), 0.0);
    REQUIRE(m.classes == std::vector<std::string>{"false", "true"});
    CHECK(m.priors[0] == doctest::Approx(9.0 / 17.0));
    CHECK(m.priors[1] == doctest::Approx(8.0 / 17.0));
    CHECK(m.priors[0] + m.priors[1] == doctest::Approx(1.0).epsilon(1e-12));

    const Dataset t1 = melon_t1();
    const auto scores = nb_score(m, t1, 0);
    CHECK(scores[1] == doctest::Approx(-2.9492548975144546).epsilon(1e-9));
    CHECK(scores[0] == doctest::Approx(-9.587447782817266).epsilon(1e-9));
    CHECK(std::exp(scores[1]) == doctest::Approx(0.052).epsilon(0.01 / 0.052));
    CHECK(nb_predict_row(m, t1, 0) == "true");
  }

  TEST_CASE("conditional tables are normalized and smoothing removes zeros") {
    const auto m = nb_fit(watermelon(), 1.0);
    for (const auto& lk : m.likelihoods) {
      if (const auto* cat = std::get_if<CategoricalLikelihood>(&lk)) {
        for (const auto& row : cat->prob) {
          CHECK(std::accumulate(row.begin(), row.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
          for (double p : row) CHECK(p > 0.0);
        }
      } else {
        for (double sd : std::get<GaussianLikelihood>(lk).sd) CHECK(sd > 0.0);
      }
    }
  }

  TEST_CASE("unseen category is an error only without smoothing") {
    const Dataset odd = parse_csv(
        "color,root,sound,texture,umbilicus,surface,density,sugar\n"
        "purple,curly,muffled,clear,hollow,hard,0.697,0.460\n");
    CHECK_ERROR_CODE(nb_predict(nb_fit(watermelon(), 0.0), odd), ErrorCode::unknown_category);
    CHECK_NOTHROW(nb_predict(nb_fit(watermelon(), 1.0), odd));
  }

  TEST_CASE("one class training set") {
    const auto m = nb_fit(line_data({1, 2, 3}, {"only", "only", "only"}));
    CHECK(m.priors == std::vector<double>{1.0});
    CHECK(nb_predict_row(m, line_data({100}, {"only"}), 0) == "only");
  }

  TEST_CASE("constant numeric feature survives the variance floor") {
    const auto m = nb_fit(line_data({2, 2, 5, 6}, {"a", "a", "b", "b"}));
    const auto post = nb_posterior(m, line_data({2}, {"a"}), 0);
    CHECK(std::isfinite(post[0]));
    CHECK(post[0] > 0.99);
  }

  TEST_CASE("shifting every class score leaves the argmax unchanged") {
    const auto m = nb_fit(iris());
    const Dataset d = iris();
    for (std::size_t r = 0; r < d.n_rows(); r += 7) {
      auto s = nb_score(m, d, r);
      const auto best = std::max_element(s.begin(), s.end()) - s.begin();
      for (double& v : s) v += 123.456;
      CHECK(std::max_element(s.begin(), s.end()) - s.begin() == best);
      CHECK(m.classes[static_cast<std::size_t>(best)] == nb_predict_row(m, d, r));
    }
  }

  TEST_CASE("gaussian density") {
    CHECK(gaussian_density(0.0, 0.0, 1.0) == doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)));
  }
}

TEST_SUITE("tree") {
  TEST_CASE("impurity measures") {
    const std::vector<double> pure{4, 0}, even{5, 5}, ripe{8, 9};
    CHECK(entropy(pure) == 0.0);
    CHECK(gini(pure) == 0.0);
    CHECK(entropy(even) == doctest::Approx(1.0));
    CHECK(gini(even) == doctest::Approx(0.5));
    CHECK(entropy(ripe) == doctest::Approx(0.9975025463691152).epsilon(1e-12));
  }

  TEST_CASE("full growth memorizes attribute-distinct rows") {
    for (auto crit : {Criterion::entropy, Criterion::gini}) {
      const Dataset d = watermelon();
      const auto m = tree_fit(d, TreeParams{crit, std::nullopt, 1});
      CHECK(tree_predict(m, d) == d.class_labels());
    }
  }

  TEST_CASE("structural invariants") {
    const Dataset d = iris();
    const auto m = tree_fit(d, TreeParams{Criterion::gini, 3, 2});
    CHECK(m.depth() <= 3);
    std::vector<std::size_t> reached(m.nodes.size(), 0);
    for (std::size_t r = 0; r < d.n_rows(); ++r) ++reached[tree_leaf_of(m, d, r)];
    for (std::size_t i = 0; i < m.nodes.size(); ++i) {
      const auto& n = m.nodes[i];
      const double mass = std::accumulate(n.distribution.begin(), n.distribution.end(), 0.0);
      CHECK(mass == doctest::Approx(static_cast<double>(n.support)));
      if (n.is_leaf()) {
        CHECK(reached[i] == n.support);
        CHECK(n.support >= 2);
      } else {
        double children = 0.0;
        for (std::size_t c : n.children) {
          const auto& ch = m.nodes[c];
          children += static_cast<double>(ch.support) / static_cast<double>(n.support) *
                      impurity(Criterion::gini, ch.distribution);
        }
        CHECK(children <= impurity(Criterion::gini, n.distribution) + 1e-12);
      }
    }
  }

  TEST_CASE("iris root split mirrors the classic petal threshold") {
    const auto m = tree_fit(iris(), TreeParams{Criterion::gini, 1, 1});
    const std::string text = tree_export_text(m);
    CHECK(text.find("|---") != std::string::npos);
    CHECK(m.nodes[0].kind == TreeNode::Kind::threshold);
    CHECK(m.leaf_count() == 2);
  }

  TEST_CASE("categorical splits branch once per category") {
    const auto m = tree_fit(watermelon().with_features({watermelon().feature(3)}), TreeParams{});
    REQUIRE(m.nodes[0].kind == TreeNode::Kind::category);
    CHECK(m.nodes[0].children.size() == m.nodes[0].categories.size());
  }

  TEST_CASE("post-pruning never hurts validation accuracy") {
    const Dataset d = iris();
    const Split s = train_test_split(d, 0.3, 3, true);
    const auto full = tree_fit(s.train, TreeParams{});
    const auto pruned = tree_fit(s.train, TreeParams{}, true, &s.test);
    CHECK(pruned.pruning.post_pruned);
    CHECK(pruned.pruning.nodes_after <= pruned.pruning.nodes_before);
    auto acc = [&](const TreeModel& m) {
      return accuracy(ConfusionMatrix::from_labels(s.test.class_labels(), tree_predict(m, s.test)));
    };
    CHECK(acc(pruned) >= acc(full));
  }

  TEST_CASE("weights act like repeated rows") {
    const Dataset d = line_data({1, 2, 3, 4}, {"a", "a", "b", "b"});
    const std::vector<double> w{1, 1, 1, 3};
    const std::vector<std::size_t> rows{0, 1, 2, 3, 3, 3};
    const auto weighted = tree_fit(d, TreeParams{Criterion::entropy, 1, 1}, w);
    const auto repeated = tree_fit(d.select_rows(rows), TreeParams{Criterion::entropy, 1, 1});
    CHECK(weighted.nodes[0].threshold == repeated.nodes[0].threshold);
    CHECK(weighted.nodes[0].distribution == repeated.nodes[0].distribution);
  }

  TEST_CASE("tree errors") {
    CHECK_ERROR_CODE(tree_fit(Dataset::empty_rows(0, Column("y", std::vector<std::string>{})), TreeParams{}),
                     ErrorCode::empty_dataset);
    CHECK_ERROR_CODE(tree_fit(iris(), TreeParams{}, true, nullptr), ErrorCode::validation_required);
  }
}

TEST_SUITE("ols") {
  TEST_CASE("simple regression") {
    const std::vector<double> x{1, 2, 3, 4, 5}, y{1.00, 2.00, 1.30, 3.75, 2.25};
    const auto m = ols_fit_simple(x, y);
    CHECK(m.coefficients[0] == doctest::Approx(0.785).epsilon(1e-12));
    CHECK(m.coefficients[1] == doctest::Approx(0.425).epsilon(1e-12));
  }

  TEST_CASE("quadratic regression") {
    const std::vector<double> x{3, 4, 5, 6, 7}, y{2.5, 3.2, 3.8, 6.5, 11.5};
    const auto m = ols_fit_polynomial(x, y, 2);
    REQUIRE(m.coefficients.size() == 3);
    CHECK(m.coefficients[0] == doctest::Approx(12.428571428571).epsilon(1e-9));
    CHECK(m.coefficients[1] == doctest::Approx(-5.512857142857).epsilon(1e-9));
    CHECK(m.coefficients[2] == doctest::Approx(0.764285714286).epsilon(1e-9));
  }

  TEST_CASE("multiple regression and residual orthogonality") {
    const Matrix x{{1, 1}, {1, 2}, {2, 2}, {0, 1}};
    const std::vector<double> y{3.25, 6.5, 3.5, 5.0};
    const auto m = ols_fit_multiple(x, y);
    CHECK(m.coefficients[0] == doctest::Approx(2.0625).epsilon(1e-12));
    CHECK(m.coefficients[1] == doctest::Approx(-2.375).epsilon(1e-12));
    CHECK(m.coefficients[2] == doctest::Approx(3.25).epsilon(1e-12));

    const Matrix design = ols_design_matrix(m, x);
    const auto fitted = ols_predict(m, x);
    for (std::size_t c = 0; c < design.cols(); ++c) {
      double dot = 0.0;
      for (std::size_t r = 0; r < design.rows(); ++r) dot += design(r, c) * (y[r] - fitted[r]);
      CHECK(std::abs(dot) < 1e-8);
    }
  }

  TEST_CASE("ols errors") {
    const std::vector<double> x{1, 1, 1}, y{1, 2, 3};
    CHECK_ERROR_CODE(ols_fit_simple(x, y), ErrorCode::rank_deficient);
    CHECK_ERROR_CODE(ols_fit_simple(x, std::vector<double>{1, 2}), ErrorCode::length_mismatch);
    CHECK_ERROR_CODE(ols_fit_multiple(Matrix{{1, 2}, {2, 4}, {3, 6}}, y), ErrorCode::rank_deficient);
  }
}
