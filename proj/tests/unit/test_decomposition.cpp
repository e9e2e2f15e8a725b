#include <cmath>
#include <numeric>

#include "support.hpp"
#include "tabula/decomposition.hpp"
#include "tabula/error.hpp"
#include "tabula/rng.hpp"

using namespace tabula;
using tabula::test::data_path;

namespace {

Matrix example_data() { return load_csv(data_path("pca_example.csv")).numeric_matrix(); }

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix x(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) x(r, c) = rng.uniform01() * static_cast<double>(c + 1) + 0.3 * x(r, 0);
  return x;
}

}  // namespace

TEST_CASE("two-feature worked example") {
  const PcaModel m = pca_fit(example_data(), 1);
  CHECK(m.covariance(0, 0) == doctest::Approx(14.0));
  CHECK(m.covariance(0, 1) == doctest::Approx(-11.0));
  CHECK(m.covariance(1, 1) == doctest::Approx(23.0));
  CHECK(m.eigenvalues[0] == doctest::Approx(0.5 * (37.0 + std::sqrt(565.0))).epsilon(1e-12));
  CHECK(m.eigenvalues[1] == doctest::Approx(0.5 * (37.0 - std::sqrt(565.0))).epsilon(1e-12));
  CHECK(m.eigenvalues[0] == doctest::Approx(30.3849).epsilon(1e-5));

  // Largest-magnitude entry positive; the reference vector is the negation.
  CHECK(m.components(0, 0) == doctest::Approx(-0.55738997).epsilon(1e-7));
  CHECK(m.components(0, 1) == doctest::Approx(0.83025082).epsilon(1e-7));
  CHECK(std::abs(m.components(0, 0)) == doctest::Approx(0.5574).epsilon(1e-4));

  const Matrix scores = pca_transform(m, example_data());
  REQUIRE(scores.cols() == 1);
  const std::vector<double> expected{4.305186922674707, -3.7361286866113304, -5.692827710560994, 5.123769474497617};
  const std::vector<double> reference{-4.3052, 3.7361, 5.6928, -5.1238};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(scores(i, 0) == doctest::Approx(expected[i]).epsilon(1e-9));
    CHECK(-scores(i, 0) == doctest::Approx(reference[i]).epsilon(1e-4));
  }
}

TEST_CASE("axis-aligned covariance") {
  // Centered, with sample variances 4 and 1 and no correlation.
  const double a = std::sqrt(6.0), b = std::sqrt(1.5);
  const Matrix x{{a, 0}, {-a, 0}, {0, b}, {0, -b}};
  const PcaModel m = pca_fit(x, 2);
  CHECK(m.eigenvalues[0] == doctest::Approx(4.0));
  CHECK(m.eigenvalues[1] == doctest::Approx(1.0));
  CHECK(m.components(0, 0) == doctest::Approx(1.0));
  CHECK(m.components(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("structural properties") {
  const Matrix x = random_matrix(40, 4, 17);
  const PcaModel full = pca_fit(x, 4);

  double trace = 0.0;
  for (std::size_t i = 0; i < 4; ++i) trace += full.covariance(i, i);
  CHECK(std::accumulate(full.eigenvalues.begin(), full.eigenvalues.end(), 0.0) == doctest::Approx(trace).epsilon(1e-8));
  for (std::size_t i = 0; i < 4; ++i) {
    if (i > 0) CHECK(full.eigenvalues[i] <= full.eigenvalues[i - 1]);
    for (std::size_t j = 0; j < 4; ++j) {
      double dot = 0.0;
      for (std::size_t c = 0; c < 4; ++c) dot += full.components(i, c) * full.components(j, c);
      CHECK(std::abs(dot - (i == j ? 1.0 : 0.0)) < 1e-9);
    }
  }

  const auto ratios = full.explained_variance_ratio();
  for (double r : ratios) CHECK((r >= 0.0 && r <= 1.0));
  CHECK(std::accumulate(ratios.begin(), ratios.end(), 0.0) == doctest::Approx(1.0));

  const Matrix back = pca_inverse(full, pca_transform(full, x));
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t c = 0; c < 4; ++c) CHECK(std::abs(back(r, c) - x(r, c)) < 1e-9);

  const Matrix scores = pca_transform(full, x);
  const Matrix score_cov = covariance(scores, 1);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (i != j) CHECK(std::abs(score_cov(i, j)) < 1e-8);
}

TEST_CASE("truncated reconstruction error matches the dropped eigenvalues") {
  const Matrix x = random_matrix(25, 3, 4);
  const double n = static_cast<double>(x.rows());
  for (std::size_t p = 1; p <= 3; ++p) {
    const PcaModel m = pca_fit(x, p);
    const Matrix back = pca_inverse(m, pca_transform(m, x));
    double err = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r)
      for (std::size_t c = 0; c < 3; ++c) err += std::pow(back(r, c) - x(r, c), 2);
    double dropped = 0.0;
    for (std::size_t j = p; j < 3; ++j) dropped += m.eigenvalues[j];
    CHECK(std::abs(err / n - dropped * (n - 1.0) / n) < 1e-8);
  }
}

TEST_CASE("centering") {
  const Matrix x = random_matrix(10, 3, 8);
  const PcaModel m = pca_fit(x, 2);
  const Matrix mean{{m.means[0], m.means[1], m.means[2]}};
  const Matrix s = pca_transform(m, mean);
  CHECK(std::abs(s(0, 0)) < 1e-12);
  CHECK(std::abs(s(0, 1)) < 1e-12);

  Matrix shifted = x;
  for (std::size_t r = 0; r < x.rows(); ++r) shifted(r, 1) += 100.0;
  const PcaModel ms = pca_fit(shifted, 2);
  const Matrix a = pca_transform(m, x), b = pca_transform(ms, shifted);
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t c = 0; c < 2; ++c) CHECK(b(r, c) == doctest::Approx(a(r, c)).epsilon(1e-9));
}

TEST_CASE("dataset entry point keeps feature names") {
  const PcaModel m = pca_fit(load_csv(data_path("iris.csv"), "Class"), 2);
  CHECK(m.feature_names.size() == 4);
  CHECK(m.retained == 2);
  CHECK(m.explained_variance_ratio()[0] > 0.9);
}

TEST_CASE("pca errors") {
  CHECK_ERROR_CODE(pca_fit(example_data(), 3), ErrorCode::p_too_large);
  CHECK_ERROR_CODE(pca_fit(Matrix{{1, 2}}, 1), ErrorCode::too_few_rows);
  const PcaModel m = pca_fit(example_data(), 1);
  CHECK_ERROR_CODE(pca_transform(m, Matrix{{1, 2, 3}}), ErrorCode::shape_mismatch);
  CHECK_ERROR_CODE(pca_inverse(m, Matrix{{1, 2}}), ErrorCode::shape_mismatch);
}
