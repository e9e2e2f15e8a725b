#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tabula/matrix.hpp"

namespace tabula {

/// Minkowski order; `infinity()` selects the max-gap (Chebyshev) form.
class Order {
 public:
  constexpr explicit Order(double g) : g_(g), infinite_(false) {}
  static constexpr Order infinity() { return Order(); }

  bool is_infinite() const noexcept { return infinite_; }
  double value() const noexcept { return g_; }

  friend bool operator==(const Order&, const Order&) = default;

 private:
  constexpr Order() : g_(0.0), infinite_(true) {}
  double g_;
  bool infinite_;
};

enum class MetricKind { minkowski, weighted_minkowski, simple_matching, nominal_matching };

/// A named dissimilarity over numeric feature rows.
struct DistanceMetric {
  MetricKind kind = MetricKind::minkowski;
  Order order{2.0};
  std::vector<double> weights;

  static DistanceMetric euclidean() { return {MetricKind::minkowski, Order(2.0), {}}; }
  static DistanceMetric manhattan() { return {MetricKind::minkowski, Order(1.0), {}}; }
  static DistanceMetric chebyshev() { return {MetricKind::minkowski, Order::infinity(), {}}; }

  double operator()(std::span<const double> x, std::span<const double> y) const;

  /// `euclidean`, `manhattan`, `chebyshev`, `minkowski:g=<real>`,
  /// `simple-matching`.
  static DistanceMetric parse(std::string_view text);
  std::string to_string() const;
};

double minkowski(std::span<const double> x, std::span<const double> y, Order g);
double weighted_minkowski(std::span<const double> x, std::span<const double> y, Order g,
                          std::span<const double> weights);
/// Mismatch fraction over 0/1-encoded rows.
double simple_matching(std::span<const double> x, std::span<const double> y);
/// Fraction of positions holding different categories.
double nominal_matching(std::span<const std::string> x, std::span<const std::string> y);

/// Symmetric n x n matrix of pairwise distances between the rows of `x`.
Matrix pairwise_distances(const Matrix& x, const DistanceMetric& metric);

}  // namespace tabula
