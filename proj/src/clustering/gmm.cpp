#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "tabula/clustering.hpp"
#include "tabula/error.hpp"
#include "tabula/parallel.hpp"
#include "tabula/rng.hpp"

namespace tabula {

double gaussian_log_density(std::span<const double> x, std::span<const double> mean, const Cholesky& chol) {
  std::vector<double> diff(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) diff[i] = x[i] - mean[i];
  const auto z = forward_substitute(chol.lower, diff);
  const double maha = dot(z, z);
  const double d = static_cast<double>(x.size());
  return -0.5 * (d * std::log(2.0 * std::numbers::pi) + chol.log_det + maha);
}

EStep gmm_e_step(const Matrix& x, const std::vector<double>& weights, const Matrix& means,
                 const std::vector<Matrix>& covariances) {
  const std::size_t k = weights.size();
  std::vector<Cholesky> factors;
  factors.reserve(k);
  for (std::size_t c = 0; c < k; ++c) {
    auto f = cholesky(covariances[c]);
    if (!f) throw Error(ErrorCode::singular_covariance, "covariance of component " + std::to_string(c) + " is not positive definite");
    factors.push_back(std::move(*f));
  }

  EStep out{Matrix(x.rows(), k), 0.0};
  std::vector<double> row_ll(x.rows());
  parallel_for(x.rows(), [&](std::size_t i) {
    std::vector<double> logp(k);
    for (std::size_t c = 0; c < k; ++c)
      logp[c] = std::log(weights[c]) + gaussian_log_density(x.row(i), means.row(c), factors[c]);
    const double top = *std::max_element(logp.begin(), logp.end());
    double sum = 0.0;
    for (double& v : logp) {
      v = std::exp(v - top);
      sum += v;
    }
    for (std::size_t c = 0; c < k; ++c) out.gamma(i, c) = logp[c] / sum;
    row_ll[i] = top + std::log(sum);
  });
  out.log_likelihood = std::accumulate(row_ll.begin(), row_ll.end(), 0.0);
  return out;
}

namespace {

void add_ridge(Matrix& cov) {
  double trace = 0.0;
  for (std::size_t i = 0; i < cov.rows(); ++i) trace += cov(i, i);
  double eps = 1e-6 * trace / static_cast<double>(cov.rows());
  if (!(eps > 0.0)) eps = 1e-12;
  for (std::size_t i = 0; i < cov.rows(); ++i) cov(i, i) += eps;
}

}  // namespace

GmmInit gmm_m_step(const Matrix& x, const Matrix& gamma, bool ridge) {
  const std::size_t n = x.rows(), d = x.cols(), k = gamma.cols();
  GmmInit p{std::vector<double>(k), Matrix(k, d), std::vector<Matrix>(k, Matrix(d, d))};
  for (std::size_t c = 0; c < k; ++c) {
    double nk = 0.0;
    for (std::size_t i = 0; i < n; ++i) nk += gamma(i, c);
    p.weights[c] = nk / static_cast<double>(n);
    if (!(nk > 0.0)) throw Error(ErrorCode::singular_covariance, "component " + std::to_string(c) + " lost all mass");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < d; ++j) p.means(c, j) += gamma(i, c) * x(i, j);
    for (std::size_t j = 0; j < d; ++j) p.means(c, j) /= nk;

    Matrix& s = p.covariances[c];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t a = 0; a < d; ++a) {
        const double da = x(i, a) - p.means(c, a);
        for (std::size_t b = a; b < d; ++b) s(a, b) += gamma(i, c) * da * (x(i, b) - p.means(c, b));
      }
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = a; b < d; ++b) {
        s(a, b) /= nk;
        s(b, a) = s(a, b);
      }
    if (ridge) add_ridge(s);
  }
  return p;
}

namespace {

GmmInit default_init(const Matrix& x, const GmmOptions& o) {
  Rng rng(o.seed);
  std::vector<std::size_t> picks(x.rows());
  std::iota(picks.begin(), picks.end(), std::size_t{0});
  for (std::size_t i = 0; i < o.k; ++i) std::swap(picks[i], picks[i + rng.uniform_index(x.rows() - i)]);
  picks.resize(o.k);
  Matrix cov = covariance(x, 0);
  if (o.ridge) add_ridge(cov);
  return {std::vector<double>(o.k, 1.0 / static_cast<double>(o.k)), x.select_rows(picks),
          std::vector<Matrix>(o.k, cov)};
}

}  // namespace

GmmResult gmm_em(const Matrix& x, const GmmOptions& o) {
  if (x.rows() == 0) throw Error(ErrorCode::empty, "GMM needs at least one row");
  if (o.k == 0) throw Error(ErrorCode::invalid_argument, "k must be >= 1");
  if (o.k > x.rows())
    throw Error(ErrorCode::k_too_large,
                "k = " + std::to_string(o.k) + " exceeds " + std::to_string(x.rows()) + " rows");

  GmmInit p = o.init ? *o.init : default_init(x, o);
  if (p.weights.size() != o.k || p.means.rows() != o.k || p.means.cols() != x.cols() || p.covariances.size() != o.k)
    throw Error(ErrorCode::shape_mismatch, "initial GMM parameters do not match k and the feature count");

  GmmModel model;
  EStep e = gmm_e_step(x, p.weights, p.means, p.covariances);
  model.log_likelihood.push_back(e.log_likelihood);
  while (model.iterations < o.max_iter) {
    p = gmm_m_step(x, e.gamma, o.ridge);
    e = gmm_e_step(x, p.weights, p.means, p.covariances);
    ++model.iterations;
    const double delta = e.log_likelihood - model.log_likelihood.back();
    model.log_likelihood.push_back(e.log_likelihood);
    if (std::abs(delta) < o.tol) {
      model.converged = true;
      break;
    }
  }
  model.weights = std::move(p.weights);
  model.means = std::move(p.means);
  model.covariances = std::move(p.covariances);

  std::vector<int> ids(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < o.k; ++c)
      if (e.gamma(i, c) > e.gamma(i, best)) best = c;
    ids[i] = static_cast<int>(best);
  }
  return {std::move(model), std::move(e.gamma), ClusterAssignment::compact(std::move(ids))};
}

}  // namespace tabula
