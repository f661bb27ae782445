#include "cfx/models/random_forest.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "cfx/error.hpp"
#include "cfx/parallel.hpp"
#include "cfx/seed.hpp"

namespace cfx {

using nlohmann::json;

RandomForest::RandomForest(std::vector<DecisionTree> trees, ForestParams params, std::uint64_t seed)
    : trees_(std::move(trees)), params_(params), seed_(seed) {
  if (trees_.empty()) throw Error(ErrorKind::BadModel, "forest needs at least one tree");
  params_.n_trees = static_cast<int>(trees_.size());
  for (const auto& t : trees_)
    if (t.width() != trees_.front().width())
      throw Error(ErrorKind::BadModel, "forest trees disagree on input width");
}

double RandomForest::predict_proba(std::span<const double> x) const {
  double s = 0.0;
  for (const auto& t : trees_) s += t.predict_proba(x);
  return s / static_cast<double>(trees_.size());
}

RandomForest fit_random_forest(const EncodedDataset& data, const ForestParams& params,
                               std::uint64_t seed) {
  if (params.n_trees < 1) throw Error(ErrorKind::BadConfig, "n_trees must be >= 1");
  if (data.size() == 0) throw Error(ErrorKind::EmptyDataset, "cannot fit a forest on zero rows");

  TreeParams tp;
  tp.max_depth = params.max_depth;
  tp.min_leaf = params.min_leaf;
  tp.feature_subsample = params.feature_subsample.value_or(
      std::sqrt(static_cast<double>(data.width)) / static_cast<double>(data.width));

  std::vector<DecisionTree> trees(static_cast<std::size_t>(params.n_trees));
  parallel_for(
      trees.size(),
      [&](std::size_t t) {
        const std::uint64_t tree_seed = derive_seed(seed, t);
        std::vector<std::size_t> sample(data.size());
        if (params.bootstrap) {
          std::mt19937_64 rng(derive_seed(tree_seed, 0xb007));
          std::uniform_int_distribution<std::size_t> pick(0, data.size() - 1);
          for (auto& s : sample) s = pick(rng);
        } else {
          std::iota(sample.begin(), sample.end(), 0);
        }
        trees[t] = fit_decision_tree(data, sample, tp, tree_seed);
      },
      params.threads);
  return RandomForest(std::move(trees), params, seed);
}

void to_json(json& j, const RandomForest& forest) {
  const auto& p = forest.params();
  j = json{{"n_trees", p.n_trees},
           {"max_depth", p.max_depth},
           {"min_leaf", p.min_leaf},
           {"bootstrap", p.bootstrap},
           {"seed", forest.seed()},
           {"trees", forest.trees()}};
  j["feature_subsample"] = p.feature_subsample ? json(*p.feature_subsample) : json(nullptr);
}

void from_json(const json& j, RandomForest& forest) {
  ForestParams p;
  p.max_depth = j.value("max_depth", p.max_depth);
  p.min_leaf = j.value("min_leaf", p.min_leaf);
  p.bootstrap = j.value("bootstrap", p.bootstrap);
  if (j.contains("feature_subsample") && !j["feature_subsample"].is_null())
    p.feature_subsample = j["feature_subsample"].get<double>();
  forest = RandomForest(j.at("trees").get<std::vector<DecisionTree>>(), p,
                        j.value("seed", std::uint64_t{0}));
}

}  // namespace cfx
