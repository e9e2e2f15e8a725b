#pragma once

#include <span>
#include <string>
#include <vector>

#include "tabula/dataset.hpp"
#include "tabula/distance.hpp"

namespace tabula {

/// Lazy learner: keeps the training rows verbatim.
struct KnnModel {
  std::vector<std::string> feature_names;
  Matrix rows;
  std::vector<std::string> labels;
  std::size_t k = 1;
  DistanceMetric metric;
};

KnnModel knn_fit(const Dataset& d, std::size_t k, DistanceMetric metric = DistanceMetric::euclidean());

/// Majority vote among the k nearest rows. Equal distances keep the lower
/// training index; tied votes go to the label with the smaller summed
/// distance, then to the lexicographically smaller label.
std::string knn_predict_row(const KnnModel& m, std::span<const double> row);
std::vector<std::string> knn_predict(const KnnModel& m, const Dataset& queries);

struct ErrorCurvePoint {
  std::size_t k = 0;
  double mean_error = 0.0;
};

/// Test error for every k in [k_min, k_max]; the neighbour ordering is
/// computed once per query.
std::vector<ErrorCurvePoint> knn_error_curve(const Dataset& train, const Dataset& test, std::size_t k_min,
                                             std::size_t k_max, DistanceMetric metric = DistanceMetric::euclidean());

}  // namespace tabula
