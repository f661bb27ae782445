#include "cfx/models/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "cfx/error.hpp"

namespace cfx {

using nlohmann::json;

Confusion confusion_matrix(std::span<const Label> predictions, std::span<const Label> labels) {
  if (predictions.size() != labels.size())
    throw Error(ErrorKind::LengthMismatch, std::to_string(predictions.size()) + " predictions vs " +
                                               std::to_string(labels.size()) + " labels");
  Confusion c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool y = labels[i] == 1;
    const bool p = predictions[i] == 1;
    if (y && p) ++c.tp;
    else if (y) ++c.fn;
    else if (p) ++c.fp;
    else ++c.tn;
  }
  return c;
}

namespace {

double ratio(double num, double den) { return den > 0 ? num / den : 0.0; }

}  // namespace

MetricsReport metrics_from_confusion(const Confusion& c) {
  MetricsReport m;
  m.confusion = c;
  const double n = static_cast<double>(c.total());
  if (n == 0) return m;
  const double tn = static_cast<double>(c.tn), fp = static_cast<double>(c.fp);
  const double fn = static_cast<double>(c.fn), tp = static_cast<double>(c.tp);
  m.accuracy = (tn + tp) / n;

  // class 1 as positive, then class 0 as positive
  const double p1 = ratio(tp, tp + fp), r1 = ratio(tp, tp + fn);
  const double p0 = ratio(tn, tn + fn), r0 = ratio(tn, tn + fp);
  const double f1_1 = ratio(2 * p1 * r1, p1 + r1);
  const double f1_0 = ratio(2 * p0 * r0, p0 + r0);
  const double w1 = (tp + fn) / n, w0 = (tn + fp) / n;
  m.precision = w0 * p0 + w1 * p1;
  m.recall = w0 * r0 + w1 * r1;
  m.f1 = w0 * f1_0 + w1 * f1_1;
  return m;
}

double roc_auc(std::span<const double> scores, std::span<const Label> labels) {
  if (scores.size() != labels.size())
    throw Error(ErrorKind::LengthMismatch, "scores and labels differ in length");
  const std::size_t n = scores.size();
  std::size_t n_pos = 0;
  for (auto l : labels) n_pos += (l == 1);
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0)
    throw Error(ErrorKind::SingleClassLabels, "ROC-AUC needs both classes");

  // Mann-Whitney U with mid-ranks for tied scores.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double pos_rank_sum = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);  // mean of ranks i+1..j
    for (std::size_t k = i; k < j; ++k)
      if (labels[order[k]] == 1) pos_rank_sum += mid_rank;
    i = j;
  }
  const double np = static_cast<double>(n_pos), nn = static_cast<double>(n_neg);
  const double u = pos_rank_sum - np * (np + 1) / 2.0;
  return u / (np * nn);
}

MetricsReport compute_metrics(std::span<const double> scores, std::span<const Label> labels,
                              double threshold) {
  if (scores.size() != labels.size())
    throw Error(ErrorKind::LengthMismatch, std::to_string(scores.size()) + " scores vs " +
                                               std::to_string(labels.size()) + " labels");
  std::vector<Label> predictions;
  predictions.reserve(scores.size());
  for (double s : scores) predictions.push_back(s >= threshold ? 1 : 0);
  MetricsReport m = metrics_from_confusion(confusion_matrix(predictions, labels));
  try {
    m.roc_auc = roc_auc(scores, labels);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SingleClassLabels) throw;
    m.roc_auc_error = to_string(e.kind());
  }
  return m;
}

void to_json(json& j, const Confusion& c) {
  j = json{{"tn", c.tn}, {"fp", c.fp}, {"fn", c.fn}, {"tp", c.tp}};
}

void to_json(json& j, const MetricsReport& m) {
  j = json{{"accuracy", m.accuracy},
           {"f1", m.f1},
           {"precision", m.precision},
           {"recall", m.recall},
           {"roc_auc", m.roc_auc ? json(*m.roc_auc) : json(nullptr)},
           {"confusion", m.confusion}};
  if (m.roc_auc_error) j["roc_auc_error"] = *m.roc_auc_error;
}

}  // namespace cfx
