#include <cmath>
#include <limits>

#include "support.hpp"
#include "tabula/distance.hpp"
#include "tabula/error.hpp"
#include "tabula/rng.hpp"

using namespace tabula;

using Row = std::vector<double>;

TEST_CASE("minkowski special orders") {
  CHECK(minkowski(Row{1, 1}, Row{2, 1}, Order(2)) == 1.0);
  CHECK(minkowski(Row{3, 2}, Row{2, 1}, Order(1)) == 2.0);
  CHECK(minkowski(Row{0, 0}, Row{3, 4}, Order::infinity()) == 4.0);
  CHECK(minkowski(Row{0, 0}, Row{3, 4}, Order(2)) == doctest::Approx(5.0));
}

TEST_CASE("minkowski argument errors") {
  CHECK_ERROR_CODE(minkowski(Row{1, 2}, Row{1}, Order(2)), ErrorCode::length_mismatch);
  CHECK_ERROR_CODE(minkowski(Row{1}, Row{1}, Order(0.5)), ErrorCode::order_out_of_range);
}

TEST_CASE("weighted minkowski") {
  CHECK(weighted_minkowski(Row{1, 1}, Row{2, 1}, Order(2), Row{1, 1}) == 1.0);
  CHECK(weighted_minkowski(Row{0, 0}, Row{1, 1}, Order(2), Row{4, 0}) == doctest::Approx(2.0));
  CHECK(weighted_minkowski(Row{0, 0}, Row{1, 1}, Order(1), Row{0, 0}) == 0.0);
  CHECK_ERROR_CODE(weighted_minkowski(Row{0}, Row{1}, Order(1), Row{-1}), ErrorCode::negative_weight);
}

TEST_CASE("simple matching over binary rows") {
  CHECK(simple_matching(Row{1, 0, 1}, Row{1, 0, 1}) == 0.0);
  CHECK(simple_matching(Row{1, 0}, Row{0, 1}) == 1.0);
  CHECK(simple_matching(Row{1, 1, 0, 0}, Row{1, 0, 0, 1}) == 0.5);
  CHECK_ERROR_CODE(simple_matching(Row{1, 2}, Row{0, 1}), ErrorCode::non_binary_entry);
}

TEST_CASE("nominal matching") {
  using S = std::vector<std::string>;
  CHECK(nominal_matching(S{"a", "b"}, S{"a", "b"}) == 0.0);
  CHECK(nominal_matching(S{"a", "b", "c"}, S{"a", "x", "y"}) == doctest::Approx(2.0 / 3.0));
  CHECK(nominal_matching(S{"a"}, S{"b"}) == 1.0);
  CHECK_ERROR_CODE(nominal_matching(S{"a"}, S{"a", "b"}), ErrorCode::length_mismatch);
}

TEST_CASE("metric axioms on random rows") {
  Rng rng(2024);
  auto row = [&] {
    Row r(4);
    for (double& v : r) v = rng.uniform(-5, 5);
    return r;
  };
  const std::vector<Order> orders{Order(1), Order(2), Order::infinity()};
  for (int trial = 0; trial < 200; ++trial) {
    const Row x = row(), y = row(), z = row();
    double previous = std::numeric_limits<double>::infinity();
    for (double g : {1.0, 1.5, 2.0, 3.0, 8.0}) {
      const double d = minkowski(x, y, Order(g));
      CHECK(d <= previous + 1e-12);
      previous = d;
    }
    CHECK(minkowski(x, y, Order::infinity()) <= previous + 1e-12);
    for (const Order& g : orders) {
      CHECK(minkowski(x, y, g) == minkowski(y, x, g));
      CHECK(minkowski(x, x, g) == 0.0);
      CHECK(minkowski(x, z, g) <= minkowski(x, y, g) + minkowski(y, z, g) + 1e-12);
    }
  }
}

TEST_CASE("metric strings round-trip") {
  CHECK(DistanceMetric::parse("euclidean")(Row{0, 0}, Row{3, 4}) == doctest::Approx(5.0));
  CHECK(DistanceMetric::parse("manhattan")(Row{0, 0}, Row{3, 4}) == 7.0);
  CHECK(DistanceMetric::parse("chebyshev")(Row{0, 0}, Row{3, 4}) == 4.0);
  CHECK(DistanceMetric::parse("minkowski:g=3")(Row{0, 0}, Row{3, 4}) == doctest::Approx(std::cbrt(91.0)));
  for (const char* s : {"euclidean", "manhattan", "chebyshev", "minkowski:g=3"})
    CHECK(DistanceMetric::parse(DistanceMetric::parse(s).to_string()).to_string() == DistanceMetric::parse(s).to_string());
  CHECK_ERROR_CODE(DistanceMetric::parse("cosine"), ErrorCode::invalid_argument);
}

TEST_CASE("pairwise distance matrix is symmetric with zero diagonal") {
  const Matrix x{{0, 0}, {3, 4}, {6, 8}};
  const Matrix d = pairwise_distances(x, DistanceMetric::euclidean());
  CHECK(d(0, 1) == doctest::Approx(5.0));
  CHECK(d(0, 2) == doctest::Approx(10.0));
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(d(i, i) == 0.0);
    for (std::size_t j = 0; j < 3; ++j) CHECK(d(i, j) == d(j, i));
  }
}
