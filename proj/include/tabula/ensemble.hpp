#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tabula/dataset.hpp"
#include "tabula/model.hpp"

namespace tabula {

struct BaggingModel {
  Task task = Task::classification;
  AlgoSpec base;
  std::vector<std::shared_ptr<const Predictor>> members;
  std::vector<std::vector<std::size_t>> bags;  ///< in-bag rows per member, with repeats
  std::vector<std::string> classes;            ///< sorted; vote ties go to the earliest
};

/// Each member trains on its own bootstrap of `d`; members train in parallel.
BaggingModel bagging_fit(const Dataset& d, const Estimator& base, std::size_t T, std::uint64_t seed);

std::vector<std::string> bagging_predict_labels(const BaggingModel& m, const Dataset& d);
std::vector<double> bagging_predict_values(const BaggingModel& m, const Dataset& d);

struct OobEstimate {
  double error = 0.0;  ///< misclassification rate, or MSE for regression
  std::size_t evaluated = 0;
  std::size_t skipped = 0;  ///< rows inside every bag
};

/// `d` must be the training set. Each row is predicted only by members whose
/// bag excludes it.
OobEstimate oob_error(const BaggingModel& m, const Dataset& d);

struct AdaBoostRound {
  double error = 0.0;
  double beta = 0.0;
  std::vector<double> weights;          ///< after the update, normalised
  double error_after_update = 0.0;      ///< weight of the rows h_t misclassified, under `weights`
  std::vector<bool> misclassified;
};

struct AdaBoostModel {
  AlgoSpec base;
  std::vector<std::string> classes;  ///< {label for -1, label for +1}
  std::vector<std::shared_ptr<const Predictor>> members;
  std::vector<double> betas;
  std::vector<AdaBoostRound> rounds;  ///< retained rounds only
  std::optional<std::string> stop_reason;
};

AdaBoostModel adaboost_fit(const Dataset& d, const Estimator& base, std::size_t T, std::uint64_t seed);
std::vector<double> adaboost_decision(const AdaBoostModel& m, const Dataset& d);
std::vector<std::string> adaboost_predict(const AdaBoostModel& m, const Dataset& d);

}  // namespace tabula
