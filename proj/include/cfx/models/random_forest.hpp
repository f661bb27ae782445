#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "cfx/models/decision_tree.hpp"

namespace cfx {

struct ForestParams {
  int n_trees = 100;
  int max_depth = 16;
  std::size_t min_leaf = 1;
  // nullopt = sqrt(width) / width, the usual classification default.
  std::optional<double> feature_subsample;
  bool bootstrap = true;
  unsigned threads = 0;  // 0 = hardware concurrency
};

class RandomForest {
 public:
  RandomForest() = default;
  RandomForest(std::vector<DecisionTree> trees, ForestParams params, std::uint64_t seed);

  // Mean of the member trees' probabilities.
  double predict_proba(std::span<const double> x) const;

  const std::vector<DecisionTree>& trees() const noexcept { return trees_; }
  const ForestParams& params() const noexcept { return params_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t width() const noexcept { return trees_.empty() ? 0 : trees_.front().width(); }

 private:
  std::vector<DecisionTree> trees_;
  ForestParams params_;
  std::uint64_t seed_ = 0;
};

// Each tree sees its own bootstrap resample and per-tree seed derived from
// `seed`, so the result is independent of thread scheduling.
RandomForest fit_random_forest(const EncodedDataset& data, const ForestParams& params,
                               std::uint64_t seed);

void to_json(nlohmann::json& j, const RandomForest& forest);
void from_json(const nlohmann::json& j, RandomForest& forest);

}  // namespace cfx
