#include "tabula/supervised/naive_bayes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "tabula/error.hpp"

namespace tabula {

double gaussian_density(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return std::exp(-0.5 * z * z) / (std::sqrt(2.0 * std::numbers::pi) * sd);
}

NaiveBayesModel nb_fit(const Dataset& d, double smoothing) {
  if (!(smoothing >= 0.0)) throw Error(ErrorCode::invalid_argument, "smoothing must be >= 0");
  if (d.n_rows() == 0) throw Error(ErrorCode::empty_dataset, "naive Bayes needs training rows");
  const auto labels = d.class_labels();
  const auto groups = group_by_class(labels);
  const std::size_t n_classes = groups.classes.size();

  NaiveBayesModel m;
  m.classes = groups.classes;
  m.smoothing = smoothing;
  m.feature_names = d.feature_names();
  for (const auto& rows : groups.rows) {
    m.class_counts.push_back(static_cast<double>(rows.size()));
    m.priors.push_back(static_cast<double>(rows.size()) / static_cast<double>(d.n_rows()));
  }

  for (const auto& col : d.features()) {
    if (col.is_numeric()) {
      const auto& v = col.numeric();
      GaussianLikelihood g;
      for (const auto& rows : groups.rows) {
        double mean = 0.0;
        for (std::size_t r : rows) mean += v[r];
        mean /= static_cast<double>(rows.size());
        double ss = 0.0;
        for (std::size_t r : rows) ss += (v[r] - mean) * (v[r] - mean);
        const double sd = rows.size() > 1 ? std::sqrt(ss / static_cast<double>(rows.size() - 1)) : 0.0;
        g.mean.push_back(mean);
        g.sd.push_back(std::max(sd, m.sd_floor));
      }
      m.likelihoods.emplace_back(std::move(g));
    } else {
      const auto& v = col.categorical();
      std::set<std::string> values(v.begin(), v.end());
      CategoricalLikelihood t;
      t.categories.assign(values.begin(), values.end());
      const double n_values = static_cast<double>(t.categories.size());
      for (std::size_t c = 0; c < n_classes; ++c) {
        std::vector<double> counts(t.categories.size(), 0.0);
        for (std::size_t r : groups.rows[c]) {
          auto it = std::lower_bound(t.categories.begin(), t.categories.end(), v[r]);
          counts[static_cast<std::size_t>(it - t.categories.begin())] += 1.0;
        }
        const double denom = static_cast<double>(groups.rows[c].size()) + smoothing * n_values;
        for (double& x : counts) x = (x + smoothing) / denom;
        t.prob.push_back(std::move(counts));
      }
      m.likelihoods.emplace_back(std::move(t));
    }
  }
  return m;
}

std::vector<double> nb_score(const NaiveBayesModel& m, const Dataset& d, std::size_t row) {
  std::vector<double> score(m.classes.size());
  for (std::size_t c = 0; c < m.classes.size(); ++c) score[c] = std::log(m.priors[c]);

  for (std::size_t j = 0; j < m.feature_names.size(); ++j) {
    const auto idx = d.find_feature(m.feature_names[j]);
    if (!idx) throw Error(ErrorCode::unknown_column, "feature '" + m.feature_names[j] + "' missing from query");
    const Column& col = d.feature(*idx);
    if (const auto* g = std::get_if<GaussianLikelihood>(&m.likelihoods[j])) {
      const double x = col.numeric().at(row);
      for (std::size_t c = 0; c < m.classes.size(); ++c) score[c] += std::log(gaussian_density(x, g->mean[c], g->sd[c]));
    } else {
      const auto& t = std::get<CategoricalLikelihood>(m.likelihoods[j]);
      const std::string value = col.text(row);
      auto it = std::lower_bound(t.categories.begin(), t.categories.end(), value);
      const bool known = it != t.categories.end() && *it == value;
      if (!known) {
        if (m.smoothing == 0.0)
          throw Error(ErrorCode::unknown_category,
                      "value '" + value + "' of feature '" + m.feature_names[j] + "' unseen in training");
        // Unseen value: the smoothed pseudo-count alone.
        for (std::size_t c = 0; c < m.classes.size(); ++c)
          score[c] += std::log(m.smoothing / (m.class_counts[c] + m.smoothing * static_cast<double>(t.categories.size())));
        continue;
      }
      const auto k = static_cast<std::size_t>(it - t.categories.begin());
      for (std::size_t c = 0; c < m.classes.size(); ++c) score[c] += std::log(t.prob[c][k]);
    }
  }
  return score;
}

std::vector<double> nb_posterior(const NaiveBayesModel& m, const Dataset& d, std::size_t row) {
  auto s = nb_score(m, d, row);
  const double top = *std::max_element(s.begin(), s.end());
  double total = 0.0;
  for (double& v : s) {
    v = std::isfinite(top) ? std::exp(v - top) : 0.0;
    total += v;
  }
  for (double& v : s) v /= total;
  return s;
}

std::string nb_predict_row(const NaiveBayesModel& m, const Dataset& d, std::size_t row) {
  const auto s = nb_score(m, d, row);
  // max_element keeps the first maximum, i.e. label order on ties.
  return m.classes[static_cast<std::size_t>(std::max_element(s.begin(), s.end()) - s.begin())];
}

std::vector<std::string> nb_predict(const NaiveBayesModel& m, const Dataset& d) {
  std::vector<std::string> out(d.n_rows());
  for (std::size_t r = 0; r < d.n_rows(); ++r) out[r] = nb_predict_row(m, d, r);
  return out;
}

std::string nb_predict_threshold(const NaiveBayesModel& m, const Dataset& d, std::size_t row,
                                 const std::string& positive, double threshold) {
  if (m.classes.size() != 2) throw Error(ErrorCode::not_binary, "thresholding needs exactly two classes");
  auto it = std::find(m.classes.begin(), m.classes.end(), positive);
  if (it == m.classes.end()) throw Error(ErrorCode::unknown_category, "positive class '" + positive + "'");
  const auto p = nb_posterior(m, d, row);
  const auto pos = static_cast<std::size_t>(it - m.classes.begin());
  return p[pos] >= threshold ? m.classes[pos] : m.classes[1 - pos];
}

}  // namespace tabula
