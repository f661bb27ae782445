#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include <json.hpp>

#include "cfx/models/training_data.hpp"

namespace cfx {

struct TreeLeaf {
  double class_probability = 0.0;
};

// Rows with x[feature_index] <= threshold go left.
struct TreeSplit {
  std::size_t feature_index = 0;
  double threshold = 0.0;
  std::size_t left = 0;
  std::size_t right = 0;
};

using TreeNode = std::variant<TreeLeaf, TreeSplit>;

struct TreeParams {
  int max_depth = 16;
  std::size_t min_leaf = 1;
  // Fraction of encoded columns considered at each split; 1.0 = all.
  double feature_subsample = 1.0;
};

// Flat CART tree; node 0 is the root.
class DecisionTree {
 public:
  DecisionTree() = default;
  DecisionTree(std::vector<TreeNode> nodes, std::size_t width, bool single_class = false);

  static DecisionTree constant(double probability, std::size_t width);

  double predict_proba(std::span<const double> x) const;

  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t depth() const;
  // Set when training saw a single class and fell back to a constant leaf.
  bool single_class_warning() const noexcept { return single_class_; }

  bool operator==(const DecisionTree&) const;

 private:
  std::vector<TreeNode> nodes_;
  std::size_t width_ = 0;
  bool single_class_ = false;
};

// Greedy Gini CART on `sample` (row indices into data, duplicates allowed).
DecisionTree fit_decision_tree(const EncodedDataset& data, std::span<const std::size_t> sample,
                               const TreeParams& params, std::uint64_t seed);
// Throws Error{EmptyDataset}.
DecisionTree fit_decision_tree(const EncodedDataset& data, const TreeParams& params,
                               std::uint64_t seed);

void to_json(nlohmann::json& j, const DecisionTree& tree);
void from_json(const nlohmann::json& j, DecisionTree& tree);

}  // namespace cfx
