#include "cfx/models/cross_validation.hpp"

#include "cfx/error.hpp"
#include "cfx/seed.hpp"
#include "cfx/tabular/resampling.hpp"

namespace cfx {

using nlohmann::json;

MeanMetrics mean_of(const std::vector<MetricsReport>& reports) {
  MeanMetrics m;
  if (reports.empty()) return m;
  double auc = 0.0;
  std::size_t auc_n = 0;
  for (const auto& r : reports) {
    m.accuracy += r.accuracy;
    m.f1 += r.f1;
    m.precision += r.precision;
    m.recall += r.recall;
    if (r.roc_auc) {
      auc += *r.roc_auc;
      ++auc_n;
    }
  }
  const double n = static_cast<double>(reports.size());
  m.accuracy /= n;
  m.f1 /= n;
  m.precision /= n;
  m.recall /= n;
  if (auc_n) m.roc_auc = auc / static_cast<double>(auc_n);
  return m;
}

MetricsReport evaluate(const TrainedModel& model, const Dataset& data) {
  if (!(data.schema == model.schema()))
    throw Error(ErrorKind::SchemaMismatch, "dataset schema differs from the model's schema");
  std::vector<double> scores;
  scores.reserve(data.size());
  for (const auto& row : data.rows) scores.push_back(model.predict_instance(row));
  return compute_metrics(scores, data.labels);
}

CrossValidationReport cross_validate(const Dataset& data, const ModelConfig& config, int k,
                                     std::uint64_t seed) {
  const auto folds = kfold_split(data, k, seed);
  CrossValidationReport report;
  report.folds.reserve(folds.size());
  for (std::size_t f = 0; f < folds.size(); ++f) {
    const Dataset train = data.subset(folds[f].train);
    const Dataset held_out = data.subset(folds[f].validation);
    const auto model = train_model(train, config, derive_seed(seed, f + 1));
    report.folds.push_back(evaluate(model, held_out));
  }
  report.mean = mean_of(report.folds);
  return report;
}

void to_json(json& j, const MeanMetrics& m) {
  j = json{{"accuracy", m.accuracy},
           {"f1", m.f1},
           {"precision", m.precision},
           {"recall", m.recall},
           {"roc_auc", m.roc_auc ? json(*m.roc_auc) : json(nullptr)}};
}

void to_json(json& j, const CrossValidationReport& r) {
  j = json{{"folds", r.folds}, {"mean", r.mean}};
}

}  // namespace cfx
