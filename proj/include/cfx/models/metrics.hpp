#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include <json.hpp>

#include "cfx/tabular/dataset.hpp"

namespace cfx {

struct Confusion {
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tp = 0;

  std::size_t total() const noexcept { return tn + fp + fn + tp; }
  bool operator==(const Confusion&) const = default;
};

// Counts by (label, prediction). Throws Error{LengthMismatch}.
Confusion confusion_matrix(std::span<const Label> predictions, std::span<const Label> labels);

// Precision, recall and F1 are computed per class and averaged with weights
// equal to each class's share of the labels. roc_auc is empty (and
// roc_auc_error set) when only one class is present.
struct MetricsReport {
  double accuracy = 0.0;
  double f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  std::optional<double> roc_auc;
  std::optional<std::string> roc_auc_error;
  Confusion confusion;
};

MetricsReport metrics_from_confusion(const Confusion& c);

// Pairwise concordance of scores between positives and negatives, ties 0.5.
// Throws Error{SingleClassLabels}.
double roc_auc(std::span<const double> scores, std::span<const Label> labels);

MetricsReport compute_metrics(std::span<const double> scores, std::span<const Label> labels,
                              double threshold = 0.5);

void to_json(nlohmann::json& j, const Confusion& c);
void to_json(nlohmann::json& j, const MetricsReport& m);

}  // namespace cfx
