#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tabula/dataset.hpp"

namespace tabula {

enum class Criterion { entropy, gini };

/// Shannon entropy in bits of a (possibly weighted) class histogram.
double entropy(std::span<const double> counts);
/// 1 - sum p_k^2.
double gini(std::span<const double> counts);
double impurity(Criterion c, std::span<const double> counts);

struct TreeParams {
  Criterion criterion = Criterion::entropy;
  std::optional<std::size_t> max_depth;  ///< root has depth 0
  std::size_t min_leaf = 1;              ///< rows per child
};

struct TreeNode {
  enum class Kind { leaf, threshold, category };

  Kind kind = Kind::leaf;
  std::size_t feature = 0;
  double threshold = 0.0;               ///< threshold nodes: left is x <= t
  std::vector<std::string> categories;  ///< category nodes: one child per entry
  std::vector<std::size_t> children;

  std::string label;                  ///< majority class (ties: label order)
  std::vector<double> distribution;   ///< weighted class counts
  std::size_t support = 0;            ///< training rows reaching the node
  std::size_t depth = 0;

  bool is_leaf() const noexcept { return kind == Kind::leaf; }
};

struct PruneRecord {
  bool post_pruned = false;
  std::size_t nodes_before = 0;
  std::size_t nodes_after = 0;
};

struct TreeModel {
  std::vector<std::string> classes;  ///< sorted
  std::vector<std::string> feature_names;
  std::vector<ColumnKind> feature_kinds;
  std::vector<TreeNode> nodes;  ///< nodes[0] is the root
  TreeParams params;
  PruneRecord pruning;

  std::size_t leaf_count() const;
  std::size_t depth() const;
};

/// Greedy top-down induction. Numeric features split at midpoints between
/// consecutive distinct sorted values; categorical features split one branch
/// per observed category and are not reused below that split. Entropy picks
/// the largest information gain, Gini the smallest weighted Gini index.
/// Optional non-negative row weights replace unit counts in every impurity.
TreeModel tree_fit(const Dataset& d, const TreeParams& params, std::span<const double> weights = {});

/// Fit followed by reduced-error pruning against `validation`.
TreeModel tree_fit(const Dataset& d, const TreeParams& params, bool post_prune, const Dataset* validation,
                   std::span<const double> weights = {});

/// Bottom-up: an internal node becomes a leaf when that does not increase
/// the number of validation rows it misclassifies.
TreeModel prune_reduced_error(TreeModel model, const Dataset& validation);

std::string tree_predict_row(const TreeModel& m, const Dataset& d, std::size_t row);
std::vector<std::string> tree_predict(const TreeModel& m, const Dataset& d);
/// Leaf index reached by a row.
std::size_t tree_leaf_of(const TreeModel& m, const Dataset& d, std::size_t row);

/// Indented `|---` rendering, one line per branch test and per leaf.
std::string tree_export_text(const TreeModel& m, int decimals = 2);

}  // namespace tabula
