#include "tabula/distance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "tabula/error.hpp"
#include "tabula/dataset.hpp"
#include "tabula/parallel.hpp"

namespace tabula {

namespace {

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) throw Error(ErrorCode::length_mismatch, std::to_string(a) + " vs " + std::to_string(b));
}

void check_order(Order g) {
  if (!g.is_infinite() && !(g.value() >= 1.0))
    throw Error(ErrorCode::order_out_of_range, "Minkowski order must be >= 1, got " + format_real(g.value()));
}

template <typename WeightFn>
double minkowski_impl(std::span<const double> x, std::span<const double> y, Order g, WeightFn weight) {
  if (g.is_infinite()) {
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (weight(i) > 0.0) m = std::max(m, std::abs(x[i] - y[i]));
    return m;
  }
  const double p = g.value();
  double s = 0.0;
  if (p == 1.0) {
    for (std::size_t i = 0; i < x.size(); ++i) s += weight(i) * std::abs(x[i] - y[i]);
    return s;
  }
  if (p == 2.0) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - y[i];
      s += weight(i) * d * d;
    }
    return std::sqrt(s);
  }
  for (std::size_t i = 0; i < x.size(); ++i) s += weight(i) * std::pow(std::abs(x[i] - y[i]), p);
  return std::pow(s, 1.0 / p);
}

}  // namespace

double minkowski(std::span<const double> x, std::span<const double> y, Order g) {
  check_lengths(x.size(), y.size());
  check_order(g);
  return minkowski_impl(x, y, g, [](std::size_t) { return 1.0; });
}

double weighted_minkowski(std::span<const double> x, std::span<const double> y, Order g,
                          std::span<const double> weights) {
  check_lengths(x.size(), y.size());
  check_lengths(x.size(), weights.size());
  check_order(g);
  for (double w : weights)
    if (!(w >= 0.0)) throw Error(ErrorCode::negative_weight, "weight " + format_real(w));
  return minkowski_impl(x, y, g, [&](std::size_t i) { return weights[i]; });
}

double simple_matching(std::span<const double> x, std::span<const double> y) {
  check_lengths(x.size(), y.size());
  if (x.empty()) return 0.0;
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if ((x[i] != 0.0 && x[i] != 1.0) || (y[i] != 0.0 && y[i] != 1.0))
      throw Error(ErrorCode::non_binary_entry, "position " + std::to_string(i));
    if (x[i] != y[i]) ++mismatches;
  }
  return static_cast<double>(mismatches) / static_cast<double>(x.size());
}

double nominal_matching(std::span<const std::string> x, std::span<const std::string> y) {
  check_lengths(x.size(), y.size());
  if (x.empty()) return 0.0;
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != y[i]) ++mismatches;
  return static_cast<double>(mismatches) / static_cast<double>(x.size());
}

double DistanceMetric::operator()(std::span<const double> x, std::span<const double> y) const {
  switch (kind) {
    case MetricKind::minkowski:
      return minkowski(x, y, order);
    case MetricKind::weighted_minkowski:
      return weighted_minkowski(x, y, order, weights);
    case MetricKind::simple_matching:
      return simple_matching(x, y);
    case MetricKind::nominal_matching:
      break;
  }
  throw Error(ErrorCode::invalid_argument, "nominal matching needs categorical rows");
}

DistanceMetric DistanceMetric::parse(std::string_view text) {
  if (text == "euclidean") return euclidean();
  if (text == "manhattan" || text == "cityblock") return manhattan();
  if (text == "chebyshev") return chebyshev();
  if (text == "simple-matching") return {MetricKind::simple_matching, Order(1.0), {}};
  constexpr std::string_view prefix = "minkowski:g=";
  if (text.starts_with(prefix)) {
    const std::string arg(text.substr(prefix.size()));
    if (arg == "inf" || arg == "infinity") return chebyshev();
    char* end = nullptr;
    const double g = std::strtod(arg.c_str(), &end);
    if (arg.empty() || *end != '\0') throw Error(ErrorCode::invalid_argument, "bad Minkowski order '" + arg + "'");
    check_order(Order(g));
    return {MetricKind::minkowski, Order(g), {}};
  }
  throw Error(ErrorCode::invalid_argument, "unknown metric '" + std::string(text) + "'");
}

std::string DistanceMetric::to_string() const {
  switch (kind) {
    case MetricKind::minkowski:
      if (order.is_infinite()) return "chebyshev";
      if (order.value() == 2.0) return "euclidean";
      if (order.value() == 1.0) return "manhattan";
      return "minkowski:g=" + format_real(order.value());
    case MetricKind::weighted_minkowski:
      return "weighted-minkowski";
    case MetricKind::simple_matching:
      return "simple-matching";
    case MetricKind::nominal_matching:
      return "nominal-matching";
  }
  return "unknown";
}

Matrix pairwise_distances(const Matrix& x, const DistanceMetric& metric) {
  const std::size_t n = x.rows();
  Matrix d(n, n);
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) d(i, j) = metric(x.row(i), x.row(j));
  });
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d(j, i) = d(i, j);
  return d;
}

}  // namespace tabula
