#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tabula/clustering.hpp"
#include "tabula/error.hpp"
#include "tabula/rng.hpp"

namespace tabula {

ClusterAssignment ClusterAssignment::compact(std::vector<int> ids) {
  std::vector<int> seen;
  for (int id : ids)
    if (id != kNoise) seen.push_back(id);
  std::sort(seen.begin(), seen.end());
  seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
  for (int& id : ids) {
    if (id == kNoise) continue;
    id = static_cast<int>(std::lower_bound(seen.begin(), seen.end(), id) - seen.begin());
  }
  return {std::move(ids), static_cast<int>(seen.size())};
}

std::size_t ClusterAssignment::noise_count() const {
  return static_cast<std::size_t>(std::count(ids.begin(), ids.end(), kNoise));
}

std::vector<std::vector<std::size_t>> ClusterAssignment::members() const {
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (ids[i] != kNoise) out.at(static_cast<std::size_t>(ids[i])).push_back(i);
  return out;
}

std::size_t nearest_center(const Matrix& centers, std::span<const double> row) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centers.rows(); ++c) {
    const double d = squared_euclidean(centers.row(c), row);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

namespace {

Matrix initial_centers(const Matrix& x, const KMeansOptions& o) {
  if (o.centers) {
    if (o.centers->rows() != o.k || o.centers->cols() != x.cols())
      throw Error(ErrorCode::shape_mismatch, "initial centers must be k x n_features");
    return *o.centers;
  }
  std::vector<std::size_t> picks(x.rows());
  std::iota(picks.begin(), picks.end(), std::size_t{0});
  if (o.init == KMeansInit::seeded_random) {
    Rng rng(o.seed);
    for (std::size_t i = 0; i < o.k; ++i) std::swap(picks[i], picks[i + rng.uniform_index(x.rows() - i)]);
  }
  picks.resize(o.k);
  return x.select_rows(picks);
}

std::vector<std::size_t> assign(const Matrix& x, const Matrix& centers) {
  std::vector<std::size_t> a(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) a[i] = nearest_center(centers, x.row(i));
  return a;
}

// Moves the row farthest from its own center into each empty cluster.
void fill_empty(const Matrix& x, const Matrix& centers, std::vector<std::size_t>& a, std::size_t k) {
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t c : a) ++sizes[c];
  for (std::size_t c = 0; c < k; ++c) {
    if (sizes[c] > 0) continue;
    std::size_t far = x.rows();
    double far_d = -1.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
      if (sizes[a[i]] < 2) continue;
      const double d = squared_euclidean(x.row(i), centers.row(a[i]));
      if (d > far_d) {
        far_d = d;
        far = i;
      }
    }
    if (far == x.rows()) continue;
    --sizes[a[far]];
    a[far] = c;
    ++sizes[c];
  }
}

Matrix means_of(const Matrix& x, const std::vector<std::size_t>& a, const Matrix& previous) {
  Matrix m(previous.rows(), x.cols());
  std::vector<std::size_t> counts(previous.rows(), 0);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    ++counts[a[i]];
    for (std::size_t j = 0; j < x.cols(); ++j) m(a[i], j) += x(i, j);
  }
  for (std::size_t c = 0; c < m.rows(); ++c) {
    for (std::size_t j = 0; j < x.cols(); ++j)
      m(c, j) = counts[c] > 0 ? m(c, j) / static_cast<double>(counts[c]) : previous(c, j);
  }
  return m;
}

double objective(const Matrix& x, const Matrix& centers, const std::vector<std::size_t>& a) {
  double e = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) e += squared_euclidean(x.row(i), centers.row(a[i]));
  return e;
}

}  // namespace

KMeansResult kmeans(const Matrix& x, const KMeansOptions& o) {
  if (x.rows() == 0) throw Error(ErrorCode::empty, "k-means needs at least one row");
  if (o.k == 0) throw Error(ErrorCode::invalid_argument, "k must be >= 1");
  if (o.k > x.rows())
    throw Error(ErrorCode::k_too_large,
                "k = " + std::to_string(o.k) + " exceeds " + std::to_string(x.rows()) + " rows");

  KMeansModel model;
  Matrix centers = initial_centers(x, o);
  std::vector<std::size_t> a;
  while (model.iterations < o.max_iter) {
    auto next = assign(x, centers);
    fill_empty(x, centers, next, o.k);
    if (next == a) {
      model.converged = true;
      break;
    }
    a = std::move(next);
    Matrix updated = means_of(x, a, centers);
    double shift = 0.0;
    for (std::size_t c = 0; c < o.k; ++c) shift = std::max(shift, squared_euclidean(updated.row(c), centers.row(c)));
    centers = std::move(updated);
    ++model.iterations;
    model.objective_trace.push_back(objective(x, centers, a));
    model.center_trace.push_back(centers);
    if (o.tol > 0.0 && std::sqrt(shift) < o.tol) {
      model.converged = true;
      break;
    }
  }
  if (a.empty()) a = assign(x, centers);
  model.objective = objective(x, centers, a);
  model.centers = std::move(centers);

  std::vector<int> ids(a.begin(), a.end());
  return {std::move(model), ClusterAssignment{std::move(ids), static_cast<int>(o.k)}};
}

}  // namespace tabula
