#include <algorithm>
#include <cmath>
#include <limits>

#include "tabula/clustering.hpp"
#include "tabula/dataset.hpp"
#include "tabula/error.hpp"

namespace tabula {

void check_distance_matrix(const Matrix& d) {
  if (d.rows() != d.cols()) throw Error(ErrorCode::shape_mismatch, "distance matrix must be square");
  for (std::size_t i = 0; i < d.rows(); ++i) {
    if (d(i, i) != 0.0)
      throw Error(ErrorCode::asymmetric_matrix, "diagonal entry " + std::to_string(i) + " is not zero");
    for (std::size_t j = 0; j < d.cols(); ++j) {
      if (d(i, j) < 0.0 || std::isnan(d(i, j)))
        throw Error(ErrorCode::negative_distance,
                    "entry (" + std::to_string(i) + ", " + std::to_string(j) + ") is negative");
      const double scale = std::max({1.0, std::abs(d(i, j)), std::abs(d(j, i))});
      if (std::abs(d(i, j) - d(j, i)) > 1e-12 * scale)
        throw Error(ErrorCode::asymmetric_matrix,
                    "entries (" + std::to_string(i) + ", " + std::to_string(j) + ") and (" + std::to_string(j) +
                        ", " + std::to_string(i) + ") differ");
    }
  }
}

std::string to_string(Linkage l) {
  switch (l) {
    case Linkage::single:
      return "single";
    case Linkage::complete:
      return "complete";
    case Linkage::average:
      return "average";
  }
  return "single";
}

Linkage parse_linkage(std::string_view text) {
  if (text == "single") return Linkage::single;
  if (text == "complete") return Linkage::complete;
  if (text == "average") return Linkage::average;
  throw Error(ErrorCode::invalid_argument, "unknown linkage '" + std::string(text) + "'");
}

namespace {

std::vector<DendrogramNode> leaves(std::size_t n) {
  std::vector<DendrogramNode> nodes(n);
  for (std::size_t i = 0; i < n; ++i) nodes[i].members = {i};
  return nodes;
}

std::vector<std::size_t> merged(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out;
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

Dendrogram agglomerative(const Matrix& dist, Linkage linkage) {
  check_distance_matrix(dist);
  const std::size_t n = dist.rows();
  if (n == 0) throw Error(ErrorCode::empty, "no rows to cluster");

  Dendrogram tree;
  tree.kind = DendrogramKind::agglomerative;
  tree.linkage = linkage;
  tree.nodes = leaves(n);

  // Active clusters ordered by smallest member; `between` holds linkage
  // distances indexed by node id.
  std::vector<int> active(n);
  for (std::size_t i = 0; i < n; ++i) active[i] = static_cast<int>(i);
  Matrix between(2 * n - 1, 2 * n - 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) between(i, j) = dist(i, j);

  while (active.size() > 1) {
    std::size_t bi = 0, bj = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < active.size(); ++i)
      for (std::size_t j = i + 1; j < active.size(); ++j) {
        const double v = between(active[i], active[j]);
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    const int a = active[bi], b = active[bj];
    const int id = static_cast<int>(tree.nodes.size());
    DendrogramNode node;
    node.left = a;
    node.right = b;
    node.height = best;
    node.members = merged(tree.nodes[a].members, tree.nodes[b].members);
    const double na = static_cast<double>(tree.nodes[a].members.size());
    const double nb = static_cast<double>(tree.nodes[b].members.size());
    tree.nodes.push_back(std::move(node));

    for (int other : active) {
      if (other == a || other == b) continue;
      const double da = between(a, other), db = between(b, other);
      double v = 0.0;
      switch (linkage) {
        case Linkage::single:
          v = std::min(da, db);
          break;
        case Linkage::complete:
          v = std::max(da, db);
          break;
        case Linkage::average:
          v = (na * da + nb * db) / (na + nb);
          break;
      }
      between(id, other) = between(other, id) = v;
    }
    // The merged cluster keeps the slot of its smaller-index part, so the
    // active list stays sorted by smallest member.
    active[bi] = id;
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(bj));
  }
  tree.root = active.front();
  for (int id = static_cast<int>(tree.nodes.size()) - 1; id >= static_cast<int>(n); --id) tree.split_order.push_back(id);
  return tree;
}

namespace {

double diameter(const Matrix& dist, const std::vector<std::size_t>& c) {
  double d = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j) d = std::max(d, dist(c[i], c[j]));
  return d;
}

double mean_distance(const Matrix& dist, std::size_t x, const std::vector<std::size_t>& group) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t y : group) {
    if (y == x) continue;
    sum += dist(x, y);
    ++count;
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

DianaSplit split_cluster(const Matrix& dist, const std::vector<std::size_t>& cluster) {
  DianaSplit s;
  s.cluster = cluster;
  s.diameter = diameter(dist, cluster);

  std::size_t seed = cluster.front();
  double seed_avg = -1.0;
  for (std::size_t x : cluster) {
    const double avg = mean_distance(dist, x, cluster);
    if (avg > seed_avg) {
      seed_avg = avg;
      seed = x;
    }
  }
  s.seed = seed;
  s.splinter = {seed};
  for (std::size_t x : cluster)
    if (x != seed) s.remaining.push_back(x);

  while (s.remaining.size() > 1) {
    std::size_t pick = 0;
    double gain = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.remaining.size(); ++i) {
      const std::size_t x = s.remaining[i];
      const double g = mean_distance(dist, x, s.remaining) - mean_distance(dist, x, s.splinter);
      if (g > gain) {
        gain = g;
        pick = i;
      }
    }
    if (!(gain > 0.0)) break;
    const std::size_t row = s.remaining[pick];
    s.moves.push_back({row, gain});
    s.remaining.erase(s.remaining.begin() + static_cast<std::ptrdiff_t>(pick));
    s.splinter.insert(std::upper_bound(s.splinter.begin(), s.splinter.end(), row), row);
  }
  return s;
}

}  // namespace

DianaResult diana(const Matrix& dist) {
  check_distance_matrix(dist);
  const std::size_t n = dist.rows();
  if (n < 2) throw Error(ErrorCode::too_few_rows, "DIANA needs at least two rows");

  DianaResult out;
  Dendrogram& tree = out.tree;
  tree.kind = DendrogramKind::diana;
  tree.nodes = leaves(n);

  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  tree.root = static_cast<int>(n);
  tree.nodes.push_back({-1, -1, 0.0, all});

  // Internal nodes not yet split; leaves are never queued.
  std::vector<int> open{tree.root};
  while (!open.empty()) {
    std::size_t pick = 0;
    double widest = -1.0;
    for (std::size_t i = 0; i < open.size(); ++i) {
      const double d = diameter(dist, tree.nodes[open[i]].members);
      const bool lower = tree.nodes[open[i]].members.front() < tree.nodes[open[pick]].members.front();
      if (d > widest || (d == widest && lower)) {
        widest = d;
        pick = i;
      }
    }
    const int id = open[pick];
    open.erase(open.begin() + static_cast<std::ptrdiff_t>(pick));

    DianaSplit s = split_cluster(dist, tree.nodes[id].members);
    auto child = [&](const std::vector<std::size_t>& members) {
      if (members.size() == 1) return static_cast<int>(members.front());
      const int c = static_cast<int>(tree.nodes.size());
      tree.nodes.push_back({-1, -1, 0.0, members});
      open.push_back(c);
      return c;
    };
    const int left = child(s.remaining);
    const int right = child(s.splinter);
    tree.nodes[id].left = left;
    tree.nodes[id].right = right;
    tree.nodes[id].height = s.diameter;
    tree.split_order.push_back(id);
    out.splits.push_back(std::move(s));
  }
  return out;
}

ClusterAssignment Dendrogram::cut(std::size_t k) const {
  const std::size_t n = leaf_count();
  if (k == 0 || k > n)
    throw Error(ErrorCode::k_too_large, "cannot cut " + std::to_string(n) + " leaves into " + std::to_string(k) + " clusters");
  std::vector<int> parts{root};
  for (std::size_t s = 0; s + 1 < k; ++s) {
    const int id = split_order[s];
    auto it = std::find(parts.begin(), parts.end(), id);
    *it = nodes[id].left;
    parts.push_back(nodes[id].right);
  }
  std::sort(parts.begin(), parts.end(),
            [&](int a, int b) { return nodes[a].members.front() < nodes[b].members.front(); });
  std::vector<int> ids(n, 0);
  for (std::size_t c = 0; c < parts.size(); ++c)
    for (std::size_t row : nodes[parts[c]].members) ids[row] = static_cast<int>(c);
  return {std::move(ids), static_cast<int>(k)};
}

namespace {

std::string leaf_name(std::size_t i, std::span<const std::string> names) {
  return i < names.size() ? names[i] : std::to_string(i);
}

nlohmann::json node_json(const Dendrogram& t, int id, std::span<const std::string> names) {
  const auto& node = t.nodes[id];
  if (node.left < 0) {
    const auto row = static_cast<std::size_t>(id);
    return {{"leaf", row}, {"name", leaf_name(row, names)}};
  }
  return {{"left", node_json(t, node.left, names)},
          {"right", node_json(t, node.right, names)},
          {"height", node.height}};
}

void newick(const Dendrogram& t, int id, double parent_height, std::span<const std::string> names, std::string& out) {
  const auto& node = t.nodes[id];
  if (node.left >= 0) {
    out += '(';
    newick(t, node.left, node.height, names, out);
    out += ',';
    newick(t, node.right, node.height, names, out);
    out += ')';
  } else {
    out += leaf_name(static_cast<std::size_t>(id), names);
  }
  if (parent_height >= 0.0) out += ':' + format_real(parent_height - node.height);
}

}  // namespace

nlohmann::json to_json(const Dendrogram& tree, std::span<const std::string> names) {
  nlohmann::json j = node_json(tree, tree.root, names);
  if (tree.nodes[tree.root].left < 0) return j;
  j["kind"] = tree.kind == DendrogramKind::diana ? "diana" : "agglomerative";
  if (tree.linkage) j["linkage"] = to_string(*tree.linkage);
  return j;
}

std::string to_newick(const Dendrogram& tree, std::span<const std::string> names) {
  std::string out;
  newick(tree, tree.root, -1.0, names, out);
  return out + ';';
}

}  // namespace tabula
