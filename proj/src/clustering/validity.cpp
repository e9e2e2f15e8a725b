#include <algorithm>
#include <cmath>
#include <limits>

#include "tabula/clustering.hpp"
#include "tabula/error.hpp"

namespace tabula {

ExternalIndices external_indices(const ClusterAssignment& a, const ClusterAssignment& ref) {
  if (a.size() != ref.size())
    throw Error(ErrorCode::length_mismatch,
                std::to_string(a.size()) + " assigned rows vs " + std::to_string(ref.size()) + " reference rows");
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.ids[i] != kNoise && ref.ids[i] != kNoise) rows.push_back(i);

  ExternalIndices out;
  PairCounts& p = out.pairs;
  for (std::size_t u = 0; u < rows.size(); ++u)
    for (std::size_t v = u + 1; v < rows.size(); ++v) {
      const bool same_a = a.ids[rows[u]] == a.ids[rows[v]];
      const bool same_r = ref.ids[rows[u]] == ref.ids[rows[v]];
      if (same_a && same_r) {
        ++p.a;
      } else if (same_a) {
        ++p.b;
      } else if (same_r) {
        ++p.c;
      } else {
        ++p.d;
      }
    }
  const auto A = static_cast<double>(p.a), B = static_cast<double>(p.b), C = static_cast<double>(p.c),
             D = static_cast<double>(p.d);
  if (p.a + p.b + p.c > 0) out.jaccard = A / (A + B + C);
  if (p.a + p.b > 0 && p.a + p.c > 0) out.fowlkes_mallows = std::sqrt(A / (A + B) * (A / (A + C)));
  const double m = static_cast<double>(rows.size());
  if (rows.size() >= 2) out.rand = 2.0 * (A + D) / (m * (m - 1.0));
  return out;
}

InternalIndices internal_indices(const Matrix& x, const ClusterAssignment& a) {
  if (x.rows() != a.size()) throw Error(ErrorCode::length_mismatch, "assignment length differs from row count");
  std::vector<std::vector<std::size_t>> groups;
  for (auto& g : a.members())
    if (!g.empty()) groups.push_back(std::move(g));
  if (groups.size() < 2) throw Error(ErrorCode::single_cluster, "validity indices need at least two clusters");

  const std::size_t k = groups.size();
  auto dist = [&](std::size_t i, std::size_t j) { return std::sqrt(squared_euclidean(x.row(i), x.row(j))); };

  std::vector<double> avg(k, 0.0), diam(k, 0.0);
  Matrix centers(k, x.cols());
  for (std::size_t c = 0; c < k; ++c) {
    const auto& g = groups[c];
    double sum = 0.0;
    for (std::size_t u = 0; u < g.size(); ++u) {
      for (std::size_t v = u + 1; v < g.size(); ++v) {
        const double d = dist(g[u], g[v]);
        sum += d;
        diam[c] = std::max(diam[c], d);
      }
      for (std::size_t j = 0; j < x.cols(); ++j) centers(c, j) += x(g[u], j);
    }
    const double size = static_cast<double>(g.size());
    if (g.size() > 1) avg[c] = 2.0 * sum / (size * (size - 1.0));
    for (std::size_t j = 0; j < x.cols(); ++j) centers(c, j) /= size;
  }

  const double inf = std::numeric_limits<double>::infinity();
  double dbi = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double worst = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      const double dc = std::sqrt(squared_euclidean(centers.row(i), centers.row(j)));
      const double num = avg[i] + avg[j];
      const double r = dc > 0.0 ? num / dc : (num > 0.0 ? inf : 0.0);
      worst = std::max(worst, r);
    }
    dbi += worst;
  }
  dbi /= static_cast<double>(k);

  double min_gap = inf;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      for (std::size_t u : groups[i])
        for (std::size_t v : groups[j]) min_gap = std::min(min_gap, dist(u, v));
  const double max_diam = *std::max_element(diam.begin(), diam.end());
  const double dunn = max_diam > 0.0 ? min_gap / max_diam : inf;
  return {dbi, dunn};
}

nlohmann::json to_json(const ExternalIndices& e) {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  return {{"pairs", {{"a", e.pairs.a}, {"b", e.pairs.b}, {"c", e.pairs.c}, {"d", e.pairs.d}}},
          {"jaccard", opt(e.jaccard)},
          {"fowlkes_mallows", opt(e.fowlkes_mallows)},
          {"rand", opt(e.rand)}};
}

nlohmann::json to_json(const InternalIndices& i) {
  auto tagged = [](double v) { return std::isinf(v) ? nlohmann::json("infinite") : nlohmann::json(v); };
  return {{"davies_bouldin", tagged(i.davies_bouldin)}, {"dunn", tagged(i.dunn)}};
}

}  // namespace tabula
