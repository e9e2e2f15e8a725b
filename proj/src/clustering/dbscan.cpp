#include <deque>

#include "tabula/clustering.hpp"
#include "tabula/error.hpp"
#include "tabula/parallel.hpp"

namespace tabula {

std::string_view to_string(PointRole r) {
  switch (r) {
    case PointRole::core:
      return "core";
    case PointRole::border:
      return "border";
    case PointRole::noise:
      return "noise";
  }
  return "noise";
}

DbscanResult dbscan(const Matrix& x, double eps, std::size_t min_pts, const DistanceMetric& metric,
                    std::span<const std::size_t> seed_order) {
  if (!(eps > 0.0)) throw Error(ErrorCode::invalid_eps, "eps must be > 0");
  if (min_pts == 0) throw Error(ErrorCode::invalid_argument, "min_pts must be >= 1");
  const std::size_t n = x.rows();
  for (std::size_t s : seed_order)
    if (s >= n) throw Error(ErrorCode::invalid_argument, "seed row " + std::to_string(s) + " out of range");

  std::vector<std::vector<std::size_t>> hood(n);
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j)
      if (metric(x.row(i), x.row(j)) <= eps) hood[i].push_back(j);
  });

  DbscanResult out;
  out.roles.assign(n, PointRole::noise);
  for (std::size_t i = 0; i < n; ++i) {
    if (hood[i].size() >= min_pts) {
      out.roles[i] = PointRole::core;
      out.core_points.push_back(i);
    }
  }

  std::vector<int> ids(n, kNoise);
  std::vector<std::size_t> order(seed_order.begin(), seed_order.end());
  for (std::size_t i = 0; i < n; ++i) order.push_back(i);

  int next_id = 0;
  for (std::size_t start : order) {
    if (out.roles[start] != PointRole::core || ids[start] != kNoise) continue;
    const int id = next_id++;
    ids[start] = id;
    std::deque<std::size_t> queue(hood[start].begin(), hood[start].end());
    while (!queue.empty()) {
      const std::size_t q = queue.front();
      queue.pop_front();
      if (ids[q] != kNoise) continue;
      ids[q] = id;
      if (out.roles[q] == PointRole::core) queue.insert(queue.end(), hood[q].begin(), hood[q].end());
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (ids[i] != kNoise && out.roles[i] != PointRole::core) out.roles[i] = PointRole::border;
  out.assignment = {std::move(ids), next_id};
  return out;
}

}  // namespace tabula
