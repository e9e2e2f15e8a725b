#include "tabula/supervised/knn.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "tabula/error.hpp"

namespace tabula {

namespace {

struct Neighbour {
  double distance;
  std::size_t index;
};

std::vector<Neighbour> ranked_neighbours(const KnnModel& m, std::span<const double> row) {
  std::vector<Neighbour> all(m.rows.rows());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = {m.metric(m.rows.row(i), row), i};
  std::stable_sort(all.begin(), all.end(), [](const Neighbour& a, const Neighbour& b) {
    return a.distance < b.distance;
  });
  return all;
}

std::string vote(const KnnModel& m, std::span<const Neighbour> nearest) {
  struct Tally {
    std::size_t votes = 0;
    double distance = 0.0;
  };
  std::map<std::string, Tally> tally;
  for (const auto& n : nearest) {
    auto& t = tally[m.labels[n.index]];
    ++t.votes;
    t.distance += n.distance;
  }
  // std::map iterates labels in order, so the first strictly-better entry wins.
  const std::string* best = nullptr;
  Tally best_tally;
  for (const auto& [label, t] : tally) {
    if (!best || t.votes > best_tally.votes || (t.votes == best_tally.votes && t.distance < best_tally.distance)) {
      best = &label;
      best_tally = t;
    }
  }
  return *best;
}

}  // namespace

KnnModel knn_fit(const Dataset& d, std::size_t k, DistanceMetric metric) {
  if (k < 1) throw Error(ErrorCode::invalid_argument, "k must be >= 1");
  if (k > d.n_rows())
    throw Error(ErrorCode::k_exceeds_data, "k=" + std::to_string(k) + " with " + std::to_string(d.n_rows()) + " rows");
  if (!d.all_numeric()) throw Error(ErrorCode::non_numeric_feature, "KNN needs numeric features");
  return KnnModel{d.feature_names(), d.numeric_matrix(), d.class_labels(), k, std::move(metric)};
}

std::string knn_predict_row(const KnnModel& m, std::span<const double> row) {
  if (row.size() != m.rows.cols()) throw Error(ErrorCode::length_mismatch, "query width differs from training rows");
  const auto ranked = ranked_neighbours(m, row);
  return vote(m, std::span(ranked).first(m.k));
}

std::vector<std::string> knn_predict(const KnnModel& m, const Dataset& queries) {
  const Matrix x = queries.numeric_matrix(m.feature_names);
  std::vector<std::string> out(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) out[r] = knn_predict_row(m, x.row(r));
  return out;
}

std::vector<ErrorCurvePoint> knn_error_curve(const Dataset& train, const Dataset& test, std::size_t k_min,
                                             std::size_t k_max, DistanceMetric metric) {
  if (k_min < 1 || k_min > k_max || k_max > train.n_rows())
    throw Error(ErrorCode::k_range_invalid, "k range [" + std::to_string(k_min) + ", " + std::to_string(k_max) +
                                                "] with " + std::to_string(train.n_rows()) + " training rows");
  if (test.n_rows() == 0) throw Error(ErrorCode::empty, "empty test set");
  KnnModel m = knn_fit(train, k_min, std::move(metric));
  const Matrix x = test.numeric_matrix(m.feature_names);
  const auto truth = test.class_labels();
  std::vector<std::vector<Neighbour>> ranked(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) ranked[r] = ranked_neighbours(m, x.row(r));

  std::vector<ErrorCurvePoint> curve;
  for (std::size_t k = k_min; k <= k_max; ++k) {
    std::size_t wrong = 0;
    for (std::size_t r = 0; r < x.rows(); ++r)
      if (vote(m, std::span(ranked[r]).first(k)) != truth[r]) ++wrong;
    curve.push_back({k, static_cast<double>(wrong) / static_cast<double>(x.rows())});
  }
  return curve;
}

}  // namespace tabula
