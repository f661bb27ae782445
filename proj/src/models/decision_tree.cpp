#include "cfx/models/decision_tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "cfx/error.hpp"

namespace cfx {

using nlohmann::json;

DecisionTree::DecisionTree(std::vector<TreeNode> nodes, std::size_t width, bool single_class)
    : nodes_(std::move(nodes)), width_(width), single_class_(single_class) {
  if (nodes_.empty()) throw Error(ErrorKind::BadModel, "tree has no nodes");
  for (const auto& n : nodes_) {
    if (const auto* s = std::get_if<TreeSplit>(&n)) {
      if (s->left >= nodes_.size() || s->right >= nodes_.size() || s->feature_index >= width_)
        throw Error(ErrorKind::BadModel, "split references a missing node or column");
    } else if (const auto p = std::get<TreeLeaf>(n).class_probability; !(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorKind::BadModel, "leaf probability outside [0, 1]");
    }
  }
}

DecisionTree DecisionTree::constant(double probability, std::size_t width) {
  return DecisionTree({TreeLeaf{probability}}, width);
}

double DecisionTree::predict_proba(std::span<const double> x) const {
  std::size_t at = 0;
  while (true) {
    const auto& node = nodes_[at];
    if (const auto* leaf = std::get_if<TreeLeaf>(&node)) return leaf->class_probability;
    const auto& s = std::get<TreeSplit>(node);
    at = x[s.feature_index] <= s.threshold ? s.left : s.right;
  }
}

std::size_t DecisionTree::depth() const {
  std::vector<std::size_t> d(nodes_.size(), 0);
  std::size_t best = 0;
  // children are always stored after their parent
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    best = std::max(best, d[i]);
    if (const auto* s = std::get_if<TreeSplit>(&nodes_[i])) d[s->left] = d[s->right] = d[i] + 1;
  }
  return best;
}

bool DecisionTree::operator==(const DecisionTree& other) const {
  if (width_ != other.width_ || nodes_.size() != other.nodes_.size()) return false;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& a = nodes_[i];
    const auto& b = other.nodes_[i];
    if (a.index() != b.index()) return false;
    if (const auto* la = std::get_if<TreeLeaf>(&a)) {
      if (la->class_probability != std::get<TreeLeaf>(b).class_probability) return false;
    } else {
      const auto& sa = std::get<TreeSplit>(a);
      const auto& sb = std::get<TreeSplit>(b);
      if (sa.feature_index != sb.feature_index || sa.threshold != sb.threshold ||
          sa.left != sb.left || sa.right != sb.right)
        return false;
    }
  }
  return true;
}

namespace {

struct Candidate {
  std::size_t feature = 0;
  double threshold = 0.0;
  double score = 0.0;  // n_left * gini_left + n_right * gini_right
  bool found = false;
};

class TreeBuilder {
 public:
  TreeBuilder(const EncodedDataset& data, const TreeParams& params, std::uint64_t seed)
      : data_(data), params_(params), rng_(seed) {
    columns_.resize(data.width);
    std::iota(columns_.begin(), columns_.end(), 0);
    const double frac = std::clamp(params.feature_subsample, 0.0, 1.0);
    n_candidates_ = frac >= 1.0 ? data.width
                                : std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(
                                                               frac * static_cast<double>(data.width))));
    n_candidates_ = std::min(n_candidates_, data.width);
  }

  std::vector<TreeNode> build(std::vector<std::size_t> sample) {
    grow(std::move(sample), 0);
    return std::move(nodes_);
  }

 private:
  std::size_t grow(std::vector<std::size_t> idx, int depth) {
    const std::size_t n = idx.size();
    std::size_t pos = 0;
    for (auto i : idx) pos += (data_.labels[i] == 1);
    const double p = static_cast<double>(pos) / static_cast<double>(n);

    const std::size_t self = nodes_.size();
    nodes_.emplace_back(TreeLeaf{p});
    if (depth >= params_.max_depth || pos == 0 || pos == n || n < 2 * std::max<std::size_t>(1, params_.min_leaf))
      return self;

    const Candidate best = best_split(idx, pos);
    const double parent = static_cast<double>(n) * 2.0 * p * (1.0 - p);
    if (!best.found || parent - best.score <= 1e-12) return self;

    std::vector<std::size_t> left, right;
    for (auto i : idx) (data_.rows[i][best.feature] <= best.threshold ? left : right).push_back(i);
    idx.clear();
    idx.shrink_to_fit();

    const std::size_t l = grow(std::move(left), depth + 1);
    const std::size_t r = grow(std::move(right), depth + 1);
    nodes_[self] = TreeSplit{best.feature, best.threshold, l, r};
    return self;
  }

  std::vector<std::size_t> candidate_columns() {
    if (n_candidates_ == data_.width) return columns_;
    for (std::size_t i = 0; i < n_candidates_; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, columns_.size() - 1);
      std::swap(columns_[i], columns_[pick(rng_)]);
    }
    std::vector<std::size_t> out(columns_.begin(), columns_.begin() + static_cast<std::ptrdiff_t>(n_candidates_));
    std::sort(out.begin(), out.end());
    return out;
  }

  Candidate best_split(const std::vector<std::size_t>& idx, std::size_t total_pos) {
    const std::size_t n = idx.size();
    const std::size_t min_leaf = std::max<std::size_t>(1, params_.min_leaf);
    Candidate best;
    std::vector<std::pair<double, int>> column(n);
    for (std::size_t f : candidate_columns()) {
      for (std::size_t k = 0; k < n; ++k) column[k] = {data_.rows[idx[k]][f], data_.labels[idx[k]]};
      std::sort(column.begin(), column.end());
      if (column.front().first == column.back().first) continue;
      std::size_t left_pos = 0;
      for (std::size_t k = 0; k + 1 < n; ++k) {
        left_pos += (column[k].second == 1);
        if (column[k].first == column[k + 1].first) continue;
        const std::size_t nl = k + 1;
        const std::size_t nr = n - nl;
        if (nl < min_leaf || nr < min_leaf) continue;
        const double pl = static_cast<double>(left_pos) / static_cast<double>(nl);
        const double pr = static_cast<double>(total_pos - left_pos) / static_cast<double>(nr);
        const double score = static_cast<double>(nl) * 2.0 * pl * (1.0 - pl) +
                             static_cast<double>(nr) * 2.0 * pr * (1.0 - pr);
        if (!best.found || score < best.score) {
          best = {f, 0.5 * (column[k].first + column[k + 1].first), score, true};
        }
      }
    }
    return best;
  }

  const EncodedDataset& data_;
  TreeParams params_;
  std::mt19937_64 rng_;
  std::vector<std::size_t> columns_;
  std::size_t n_candidates_ = 0;
  std::vector<TreeNode> nodes_;
};

}  // namespace

DecisionTree fit_decision_tree(const EncodedDataset& data, std::span<const std::size_t> sample,
                               const TreeParams& params, std::uint64_t seed) {
  if (sample.empty()) throw Error(ErrorKind::EmptyDataset, "cannot fit a tree on zero rows");
  std::size_t pos = 0;
  for (auto i : sample) pos += (data.labels.at(i) == 1);
  if (pos == 0 || pos == sample.size()) {
    DecisionTree t({TreeLeaf{pos == 0 ? 0.0 : 1.0}}, data.width, true);
    return t;
  }
  TreeBuilder builder(data, params, seed);
  return DecisionTree(builder.build({sample.begin(), sample.end()}), data.width);
}

DecisionTree fit_decision_tree(const EncodedDataset& data, const TreeParams& params,
                               std::uint64_t seed) {
  std::vector<std::size_t> all(data.size());
  std::iota(all.begin(), all.end(), 0);
  return fit_decision_tree(data, all, params, seed);
}

void to_json(json& j, const DecisionTree& tree) {
  json nodes = json::array();
  for (const auto& n : tree.nodes()) {
    if (const auto* leaf = std::get_if<TreeLeaf>(&n)) {
      nodes.push_back({{"leaf", leaf->class_probability}});
    } else {
      const auto& s = std::get<TreeSplit>(n);
      nodes.push_back({{"feature", s.feature_index}, {"threshold", s.threshold},
                       {"left", s.left}, {"right", s.right}});
    }
  }
  j = json{{"width", tree.width()}, {"nodes", std::move(nodes)}};
  if (tree.single_class_warning()) j["single_class_warning"] = true;
}

void from_json(const json& j, DecisionTree& tree) {
  std::vector<TreeNode> nodes;
  for (const auto& n : j.at("nodes")) {
    if (n.contains("leaf"))
      nodes.emplace_back(TreeLeaf{n.at("leaf").get<double>()});
    else
      nodes.emplace_back(TreeSplit{n.at("feature").get<std::size_t>(), n.at("threshold").get<double>(),
                                   n.at("left").get<std::size_t>(), n.at("right").get<std::size_t>()});
  }
  tree = DecisionTree(std::move(nodes), j.at("width").get<std::size_t>(),
                      j.value("single_class_warning", false));
}

}  // namespace cfx
