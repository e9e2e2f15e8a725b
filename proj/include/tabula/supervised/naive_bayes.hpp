#pragma once

#include <string>
#include <variant>
#include <vector>

#include "tabula/dataset.hpp"

namespace tabula {

/// P(category | class) for one categorical feature; prob[class][category].
struct CategoricalLikelihood {
  std::vector<std::string> categories;  ///< sorted
  std::vector<std::vector<double>> prob;
};

/// Class-conditional normal density for one numeric feature.
struct GaussianLikelihood {
  std::vector<double> mean;  ///< per class
  std::vector<double> sd;    ///< per class, sample (n-1) estimate, floored
};

struct NaiveBayesModel {
  std::vector<std::string> classes;  ///< sorted
  std::vector<double> priors;
  std::vector<double> class_counts;
  std::vector<std::string> feature_names;
  std::vector<std::variant<CategoricalLikelihood, GaussianLikelihood>> likelihoods;
  double smoothing = 1.0;
  double sd_floor = 1e-9;
};

/// Categorical features get Laplace-smoothed frequency tables
/// (count + a) / (n_c + a * |values|); numeric features get per-class
/// normal densities.
NaiveBayesModel nb_fit(const Dataset& d, double smoothing = 1.0);

/// log P(c) + sum_j log p(x_j | c) for every class, in model.classes order.
std::vector<double> nb_score(const NaiveBayesModel& m, const Dataset& d, std::size_t row);
/// Normalised posterior P(c | x).
std::vector<double> nb_posterior(const NaiveBayesModel& m, const Dataset& d, std::size_t row);

std::string nb_predict_row(const NaiveBayesModel& m, const Dataset& d, std::size_t row);
std::vector<std::string> nb_predict(const NaiveBayesModel& m, const Dataset& d);

/// Binary models only: predicts `positive` when P(positive | x) >= threshold.
std::string nb_predict_threshold(const NaiveBayesModel& m, const Dataset& d, std::size_t row,
                                 const std::string& positive, double threshold);

double gaussian_density(double x, double mean, double sd);

}  // namespace tabula
