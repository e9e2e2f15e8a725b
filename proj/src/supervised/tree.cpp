#include "tabula/supervised/tree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <set>

#include "tabula/error.hpp"

namespace tabula {

double entropy(std::span<const double> counts) {
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double c : counts) {
    if (c <= 0.0) continue;
    const double p = c / total;
    h -= p * std::log2(p);
  }
  return h;
}

double gini(std::span<const double> counts) {
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  if (total <= 0.0) return 0.0;
  double s = 0.0;
  for (double c : counts) s += (c / total) * (c / total);
  return 1.0 - s;
}

double impurity(Criterion c, std::span<const double> counts) {
  return c == Criterion::entropy ? entropy(counts) : gini(counts);
}

std::size_t TreeModel::leaf_count() const {
  // Pruning leaves orphaned nodes behind, so walk from the root.
  std::size_t leaves = 0;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const auto& n = nodes[stack.back()];
    stack.pop_back();
    if (n.is_leaf()) ++leaves;
    stack.insert(stack.end(), n.children.begin(), n.children.end());
  }
  return leaves;
}

std::size_t TreeModel::depth() const {
  std::size_t deepest = 0;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const auto& n = nodes[stack.back()];
    stack.pop_back();
    deepest = std::max(deepest, n.depth);
    stack.insert(stack.end(), n.children.begin(), n.children.end());
  }
  return deepest;
}

namespace {

struct Candidate {
  bool valid = false;
  std::size_t feature = 0;
  double threshold = 0.0;
  std::vector<std::string> categories;
  std::vector<std::vector<std::size_t>> partitions;
  double child_impurity = std::numeric_limits<double>::infinity();  // weighted sum
};

class Builder {
 public:
  Builder(const Dataset& d, const TreeParams& params, std::span<const double> weights)
      : d_(d), params_(params) {
    if (d.n_rows() == 0) throw Error(ErrorCode::empty_dataset, "cannot grow a tree on zero rows");
    if (params.min_leaf < 1) throw Error(ErrorCode::invalid_argument, "min_leaf must be >= 1");
    if (!weights.empty() && weights.size() != d.n_rows())
      throw Error(ErrorCode::length_mismatch, "weights vs rows");
    weights_.assign(d.n_rows(), 1.0);
    if (!weights.empty()) {
      for (std::size_t i = 0; i < weights.size(); ++i) {
        if (!(weights[i] >= 0.0)) throw Error(ErrorCode::negative_weight, "row weight " + format_real(weights[i]));
        weights_[i] = weights[i];
      }
    }
    const auto labels = d.class_labels();
    const auto groups = group_by_class(labels);
    model_.classes = groups.classes;
    class_of_.assign(d.n_rows(), 0);
    for (std::size_t c = 0; c < groups.rows.size(); ++c)
      for (std::size_t r : groups.rows[c]) class_of_[r] = c;
    model_.feature_names = d.feature_names();
    for (const auto& col : d.features()) model_.feature_kinds.push_back(col.kind());
    model_.params = params;
  }

  TreeModel build() {
    std::vector<std::size_t> rows(d_.n_rows());
    std::iota(rows.begin(), rows.end(), 0);
    std::vector<bool> used(d_.n_features(), false);
    grow(rows, used, 0);
    return std::move(model_);
  }

 private:
  std::vector<double> histogram(std::span<const std::size_t> rows) const {
    std::vector<double> h(model_.classes.size(), 0.0);
    for (std::size_t r : rows) h[class_of_[r]] += weights_[r];
    return h;
  }

  double weight_of(std::span<const std::size_t> rows) const {
    double w = 0.0;
    for (std::size_t r : rows) w += weights_[r];
    return w;
  }

  double weighted_child_impurity(const std::vector<std::vector<std::size_t>>& parts, double total) const {
    double s = 0.0;
    for (const auto& p : parts) {
      const auto h = histogram(p);
      s += weight_of(p) / total * impurity(params_.criterion, h);
    }
    return s;
  }

  void consider(Candidate& best, Candidate&& c) const {
    // Strict improvement keeps the earliest feature / lowest threshold on ties.
    if (!best.valid || c.child_impurity < best.child_impurity - 1e-12) best = std::move(c);
  }

  Candidate best_split(std::span<const std::size_t> rows, const std::vector<bool>& used) const {
    Candidate best;
    const double total = weight_of(rows);
    if (total <= 0.0) return best;
    for (std::size_t f = 0; f < d_.n_features(); ++f) {
      const Column& col = d_.feature(f);
      if (col.is_numeric()) {
        const auto& v = col.numeric();
        std::vector<std::size_t> sorted(rows.begin(), rows.end());
        std::stable_sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        const std::size_t k = model_.classes.size();
        std::vector<double> left(k, 0.0);
        std::vector<double> right = histogram(rows);
        double left_w = 0.0;
        for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
          const std::size_t r = sorted[i];
          left[class_of_[r]] += weights_[r];
          right[class_of_[r]] -= weights_[r];
          left_w += weights_[r];
          const double lo = v[r];
          const double hi = v[sorted[i + 1]];
          if (!(lo < hi)) continue;
          const std::size_t n_left = i + 1;
          if (n_left < params_.min_leaf || sorted.size() - n_left < params_.min_leaf) continue;
          for (double& x : right) x = std::max(x, 0.0);
          const double right_w = total - left_w;
          Candidate c;
          c.valid = true;
          c.feature = f;
          c.threshold = 0.5 * (lo + hi);
          c.child_impurity = left_w / total * impurity(params_.criterion, left) +
                             std::max(right_w, 0.0) / total * impurity(params_.criterion, right);
          consider(best, std::move(c));
        }
      } else {
        if (used[f]) continue;
        const auto& v = col.categorical();
        std::set<std::string> values;
        for (std::size_t r : rows) values.insert(v[r]);
        if (values.size() < 2) continue;
        Candidate c;
        c.valid = true;
        c.feature = f;
        c.categories.assign(values.begin(), values.end());
        c.partitions.resize(c.categories.size());
        for (std::size_t r : rows) {
          auto it = std::lower_bound(c.categories.begin(), c.categories.end(), v[r]);
          c.partitions[static_cast<std::size_t>(it - c.categories.begin())].push_back(r);
        }
        bool small = false;
        for (const auto& p : c.partitions) small = small || p.size() < params_.min_leaf;
        if (small) continue;
        c.child_impurity = weighted_child_impurity(c.partitions, total);
        consider(best, std::move(c));
      }
    }
    return best;
  }

  std::size_t grow(std::span<const std::size_t> rows, std::vector<bool>& used, std::size_t depth) {
    const std::size_t id = model_.nodes.size();
    model_.nodes.emplace_back();
    {
      TreeNode& node = model_.nodes[id];
      node.distribution = histogram(rows);
      node.support = rows.size();
      node.depth = depth;
      const auto top = std::max_element(node.distribution.begin(), node.distribution.end());
      node.label = model_.classes[static_cast<std::size_t>(top - node.distribution.begin())];
    }
    const auto& dist = model_.nodes[id].distribution;
    const bool pure = std::count_if(dist.begin(), dist.end(), [](double c) { return c > 0.0; }) <= 1;
    const bool depth_hit = params_.max_depth && depth >= *params_.max_depth;
    if (pure || depth_hit) return id;

    Candidate split = best_split(rows, used);
    if (!split.valid) return id;
    if (split.categories.empty()) {
      const auto& v = d_.feature(split.feature).numeric();
      split.partitions.assign(2, {});
      for (std::size_t r : rows) split.partitions[v[r] <= split.threshold ? 0 : 1].push_back(r);
    }

    std::vector<std::size_t> children;
    const bool categorical = !split.categories.empty();
    if (categorical) used[split.feature] = true;
    for (const auto& part : split.partitions) children.push_back(grow(part, used, depth + 1));
    if (categorical) used[split.feature] = false;

    TreeNode& node = model_.nodes[id];
    node.kind = categorical ? TreeNode::Kind::category : TreeNode::Kind::threshold;
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.categories = std::move(split.categories);
    node.children = std::move(children);
    return id;
  }

  const Dataset& d_;
  TreeParams params_;
  std::vector<double> weights_;
  std::vector<std::size_t> class_of_;
  TreeModel model_;
};

std::size_t count_reachable(const TreeModel& m) {
  std::size_t n = 0;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const auto& node = m.nodes[stack.back()];
    stack.pop_back();
    ++n;
    stack.insert(stack.end(), node.children.begin(), node.children.end());
  }
  return n;
}

std::vector<std::size_t> feature_columns(const TreeModel& m, const Dataset& d) {
  std::vector<std::size_t> cols;
  for (std::size_t j = 0; j < m.feature_names.size(); ++j) {
    auto idx = d.find_feature(m.feature_names[j]);
    if (!idx) throw Error(ErrorCode::unknown_column, "feature '" + m.feature_names[j] + "' missing from data");
    cols.push_back(*idx);
  }
  return cols;
}

std::size_t route(const TreeModel& m, const Dataset& d, std::span<const std::size_t> cols, std::size_t row) {
  std::size_t id = 0;
  while (!m.nodes[id].is_leaf()) {
    const TreeNode& n = m.nodes[id];
    const Column& col = d.feature(cols[n.feature]);
    if (n.kind == TreeNode::Kind::threshold) {
      id = n.children[col.numeric().at(row) <= n.threshold ? 0 : 1];
    } else {
      const std::string value = col.text(row);
      auto it = std::lower_bound(n.categories.begin(), n.categories.end(), value);
      // Categories never seen at this node fall back to its majority label.
      if (it == n.categories.end() || *it != value) return id;
      id = n.children[static_cast<std::size_t>(it - n.categories.begin())];
    }
  }
  return id;
}

}  // namespace

TreeModel tree_fit(const Dataset& d, const TreeParams& params, std::span<const double> weights) {
  TreeModel m = Builder(d, params, weights).build();
  m.pruning.nodes_before = m.pruning.nodes_after = m.nodes.size();
  return m;
}

TreeModel tree_fit(const Dataset& d, const TreeParams& params, bool post_prune, const Dataset* validation,
                   std::span<const double> weights) {
  if (post_prune && validation == nullptr)
    throw Error(ErrorCode::validation_required, "post-pruning needs a validation dataset");
  TreeModel m = tree_fit(d, params, weights);
  if (post_prune) m = prune_reduced_error(std::move(m), *validation);
  return m;
}

TreeModel prune_reduced_error(TreeModel model, const Dataset& validation) {
  const auto cols = feature_columns(model, validation);
  const auto truth = validation.class_labels();
  model.pruning.nodes_before = count_reachable(model);

  // Rows reaching each node.
  std::vector<std::vector<std::size_t>> reach(model.nodes.size());
  for (std::size_t r = 0; r < validation.n_rows(); ++r) {
    std::size_t id = 0;
    reach[0].push_back(r);
    while (!model.nodes[id].is_leaf()) {
      const TreeNode& n = model.nodes[id];
      const Column& col = validation.feature(cols[n.feature]);
      std::size_t next;
      if (n.kind == TreeNode::Kind::threshold) {
        next = n.children[col.numeric().at(r) <= n.threshold ? 0 : 1];
      } else {
        const std::string value = col.text(r);
        auto it = std::lower_bound(n.categories.begin(), n.categories.end(), value);
        if (it == n.categories.end() || *it != value) break;
        next = n.children[static_cast<std::size_t>(it - n.categories.begin())];
      }
      id = next;
      reach[id].push_back(r);
    }
  }

  // Returns validation errors of the (possibly pruned) subtree at id.
  std::function<std::size_t(std::size_t)> visit = [&](std::size_t id) -> std::size_t {
    TreeNode& n = model.nodes[id];
    std::size_t as_leaf = 0;
    for (std::size_t r : reach[id])
      if (truth[r] != n.label) ++as_leaf;
    if (n.is_leaf()) return as_leaf;
    std::size_t subtree = 0;
    std::size_t routed = 0;
    for (std::size_t c : n.children) {
      subtree += visit(c);
      routed += reach[c].size();
    }
    // Rows stopping here (unseen category) are scored with this node's label.
    if (routed < reach[id].size()) {
      std::vector<bool> below(validation.n_rows(), false);
      for (std::size_t c : n.children)
        for (std::size_t r : reach[c]) below[r] = true;
      for (std::size_t r : reach[id])
        if (!below[r] && truth[r] != n.label) ++subtree;
    }
    if (as_leaf <= subtree) {
      n.kind = TreeNode::Kind::leaf;
      n.children.clear();
      n.categories.clear();
      return as_leaf;
    }
    return subtree;
  };
  visit(0);
  model.pruning.post_pruned = true;
  model.pruning.nodes_after = count_reachable(model);
  return model;
}

std::size_t tree_leaf_of(const TreeModel& m, const Dataset& d, std::size_t row) {
  const auto cols = feature_columns(m, d);
  return route(m, d, cols, row);
}

std::string tree_predict_row(const TreeModel& m, const Dataset& d, std::size_t row) {
  return m.nodes[tree_leaf_of(m, d, row)].label;
}

std::vector<std::string> tree_predict(const TreeModel& m, const Dataset& d) {
  const auto cols = feature_columns(m, d);
  std::vector<std::string> out(d.n_rows());
  for (std::size_t r = 0; r < d.n_rows(); ++r) out[r] = m.nodes[route(m, d, cols, r)].label;
  return out;
}

std::string tree_export_text(const TreeModel& m, int decimals) {
  std::string out;
  auto fmt = [&](double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return std::string(buf);
  };
  std::function<void(std::size_t, std::size_t)> emit = [&](std::size_t id, std::size_t level) {
    const TreeNode& n = m.nodes[id];
    std::string indent;
    for (std::size_t i = 0; i < level; ++i) indent += "|   ";
    if (n.is_leaf()) {
      out += indent + "|--- class: " + n.label + "\n";
      return;
    }
    const std::string& name = m.feature_names[n.feature];
    if (n.kind == TreeNode::Kind::threshold) {
      out += indent + "|--- " + name + " <= " + fmt(n.threshold) + "\n";
      emit(n.children[0], level + 1);
      out += indent + "|--- " + name + " >  " + fmt(n.threshold) + "\n";
      emit(n.children[1], level + 1);
    } else {
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        out += indent + "|--- " + name + " = " + n.categories[i] + "\n";
        emit(n.children[i], level + 1);
      }
    }
  };
  emit(0, 0);
  return out;
}

}  // namespace tabula
