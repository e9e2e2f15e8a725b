#include "tabula/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "tabula/error.hpp"
#include "tabula/evaluation.hpp"
#include "tabula/parallel.hpp"
#include "tabula/rng.hpp"

namespace tabula {

namespace {

std::size_t vote(const std::vector<double>& tally) {
  return static_cast<std::size_t>(std::max_element(tally.begin(), tally.end()) - tally.begin());
}

std::size_t class_index(const std::vector<std::string>& classes, const std::string& label) {
  auto it = std::lower_bound(classes.begin(), classes.end(), label);
  if (it == classes.end() || *it != label) throw Error(ErrorCode::unknown_category, "unseen class '" + label + "'");
  return static_cast<std::size_t>(it - classes.begin());
}

// Member predictions, one vector per member.
template <typename T, typename F>
std::vector<std::vector<T>> per_member(const std::vector<std::shared_ptr<const Predictor>>& members, F predict) {
  std::vector<std::vector<T>> out(members.size());
  parallel_for(members.size(), [&](std::size_t t) { out[t] = predict(*members[t]); });
  return out;
}

}  // namespace

BaggingModel bagging_fit(const Dataset& d, const Estimator& base, std::size_t T, std::uint64_t seed) {
  if (d.n_rows() == 0) throw Error(ErrorCode::empty, "bagging needs at least one row");
  if (!d.has_labels()) throw Error(ErrorCode::missing_labels, "bagging needs a label column");
  if (T == 0) throw Error(ErrorCode::invalid_argument, "T must be >= 1");

  BaggingModel m;
  m.task = base.task();
  m.base = base.spec();
  if (m.task == Task::classification) m.classes = group_by_class(d.class_labels()).classes;

  Rng rng(seed);
  std::vector<std::uint64_t> fit_seeds(T);
  m.bags.resize(T);
  for (std::size_t t = 0; t < T; ++t) {
    Rng member = rng.split();
    m.bags[t] = bootstrap_rows(d.n_rows(), member).in_bag_rows;
    fit_seeds[t] = member.next_u64();
  }
  m.members.resize(T);
  parallel_for(T, [&](std::size_t t) { m.members[t] = base.fit(d.select_rows(m.bags[t]), fit_seeds[t]); });
  return m;
}

std::vector<std::string> bagging_predict_labels(const BaggingModel& m, const Dataset& d) {
  if (m.task != Task::classification) throw Error(ErrorCode::invalid_argument, "regression ensemble has no labels");
  const auto votes = per_member<std::string>(m.members, [&](const Predictor& p) { return p.predict_labels(d); });
  std::vector<std::string> out(d.n_rows());
  for (std::size_t r = 0; r < d.n_rows(); ++r) {
    std::vector<double> tally(m.classes.size(), 0.0);
    for (const auto& v : votes) tally[class_index(m.classes, v[r])] += 1.0;
    out[r] = m.classes[vote(tally)];
  }
  return out;
}

std::vector<double> bagging_predict_values(const BaggingModel& m, const Dataset& d) {
  if (m.task != Task::regression) throw Error(ErrorCode::invalid_argument, "classification ensemble has no values");
  const auto preds = per_member<double>(m.members, [&](const Predictor& p) { return p.predict_values(d); });
  std::vector<double> out(d.n_rows(), 0.0);
  for (const auto& p : preds)
    for (std::size_t r = 0; r < out.size(); ++r) out[r] += p[r];
  for (double& v : out) v /= static_cast<double>(preds.size());
  return out;
}

OobEstimate oob_error(const BaggingModel& m, const Dataset& d) {
  if (d.n_rows() == 0) throw Error(ErrorCode::empty, "no rows");
  const std::size_t n = d.n_rows();
  std::vector<std::vector<bool>> in_bag(m.members.size(), std::vector<bool>(n, false));
  for (std::size_t t = 0; t < m.members.size(); ++t)
    for (std::size_t r : m.bags[t]) {
      if (r >= n) throw Error(ErrorCode::shape_mismatch, "dataset is not the one the ensemble was trained on");
      in_bag[t][r] = true;
    }

  OobEstimate est;
  double loss = 0.0;
  if (m.task == Task::classification) {
    const auto votes = per_member<std::string>(m.members, [&](const Predictor& p) { return p.predict_labels(d); });
    const auto truth = d.class_labels();
    for (std::size_t r = 0; r < n; ++r) {
      std::vector<double> tally(m.classes.size(), 0.0);
      bool any = false;
      for (std::size_t t = 0; t < votes.size(); ++t) {
        if (in_bag[t][r]) continue;
        tally[class_index(m.classes, votes[t][r])] += 1.0;
        any = true;
      }
      if (!any) {
        ++est.skipped;
        continue;
      }
      ++est.evaluated;
      if (m.classes[vote(tally)] != truth[r]) loss += 1.0;
    }
  } else {
    const auto preds = per_member<double>(m.members, [&](const Predictor& p) { return p.predict_values(d); });
    const auto truth = d.targets();
    for (std::size_t r = 0; r < n; ++r) {
      double sum = 0.0;
      std::size_t count = 0;
      for (std::size_t t = 0; t < preds.size(); ++t) {
        if (in_bag[t][r]) continue;
        sum += preds[t][r];
        ++count;
      }
      if (count == 0) {
        ++est.skipped;
        continue;
      }
      ++est.evaluated;
      const double diff = sum / static_cast<double>(count) - truth[r];
      loss += diff * diff;
    }
  }
  if (est.evaluated == 0) throw Error(ErrorCode::all_rows_in_all_bags, "every row is in every bag; OOB error is undefined");
  est.error = loss / static_cast<double>(est.evaluated);
  return est;
}

AdaBoostModel adaboost_fit(const Dataset& d, const Estimator& base, std::size_t T, std::uint64_t seed) {
  if (d.n_rows() == 0) throw Error(ErrorCode::empty, "AdaBoost needs at least one row");
  if (!d.has_labels()) throw Error(ErrorCode::missing_labels, "AdaBoost needs a label column");
  if (T == 0) throw Error(ErrorCode::invalid_argument, "T must be >= 1");
  const auto labels = d.class_labels();
  AdaBoostModel m;
  m.base = base.spec();
  m.classes = group_by_class(labels).classes;
  if (m.classes.size() != 2)
    throw Error(ErrorCode::not_binary, "AdaBoost needs exactly two classes, got " + std::to_string(m.classes.size()));

  const std::size_t n = d.n_rows();
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  Rng rng(seed);
  for (std::size_t t = 0; t < T; ++t) {
    std::shared_ptr<const Predictor> h = base.fit_weighted(d, w, rng.next_u64());
    const auto pred = h->predict_labels(d);
    AdaBoostRound round;
    round.misclassified.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      round.misclassified[i] = pred[i] != labels[i];
      if (round.misclassified[i]) round.error += w[i];
    }
    if (round.error >= 0.5) {
      if (t == 0)
        throw Error(ErrorCode::no_useful_weak_learner,
                    "first weak learner has weighted error " + format_real(round.error) + " >= 0.5");
      m.stop_reason = "weighted error reached 0.5 at round " + std::to_string(t + 1);
      break;
    }
    const bool perfect = round.error <= 0.0;
    const double eps = std::max(round.error, 1e-12);
    round.beta = 0.5 * std::log((1.0 - eps) / eps);

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] *= std::exp(round.misclassified[i] ? round.beta : -round.beta);
      total += w[i];
    }
    for (double& v : w) v /= total;
    round.weights = w;
    for (std::size_t i = 0; i < n; ++i)
      if (round.misclassified[i]) round.error_after_update += w[i];

    m.members.push_back(std::move(h));
    m.betas.push_back(round.beta);
    m.rounds.push_back(std::move(round));
    if (perfect) {
      m.stop_reason = "zero weighted error at round " + std::to_string(t + 1);
      break;
    }
  }
  return m;
}

std::vector<double> adaboost_decision(const AdaBoostModel& m, const Dataset& d) {
  const auto votes = per_member<std::string>(m.members, [&](const Predictor& p) { return p.predict_labels(d); });
  std::vector<double> f(d.n_rows(), 0.0);
  for (std::size_t t = 0; t < votes.size(); ++t)
    for (std::size_t r = 0; r < f.size(); ++r) f[r] += m.betas[t] * (votes[t][r] == m.classes[1] ? 1.0 : -1.0);
  return f;
}

std::vector<std::string> adaboost_predict(const AdaBoostModel& m, const Dataset& d) {
  const auto f = adaboost_decision(m, d);
  std::vector<std::string> out(f.size());
  for (std::size_t r = 0; r < f.size(); ++r) out[r] = f[r] >= 0.0 ? m.classes[1] : m.classes[0];
  return out;
}

}  // namespace tabula
