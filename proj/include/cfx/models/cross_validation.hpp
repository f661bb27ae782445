#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "cfx/models/metrics.hpp"
#include "cfx/models/model.hpp"

namespace cfx {

struct MeanMetrics {
  double accuracy = 0.0;
  double f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  std::optional<double> roc_auc;  // mean over folds where it is defined
};

struct CrossValidationReport {
  std::vector<MetricsReport> folds;
  MeanMetrics mean;
};

MeanMetrics mean_of(const std::vector<MetricsReport>& reports);

MetricsReport evaluate(const TrainedModel& model, const Dataset& data);

// Trains on k-1 folds and scores the held-out fold. SMOTE (when enabled in
// the config) only ever sees training folds.
CrossValidationReport cross_validate(const Dataset& data, const ModelConfig& config, int k,
                                     std::uint64_t seed);

void to_json(nlohmann::json& j, const MeanMetrics& m);
void to_json(nlohmann::json& j, const CrossValidationReport& r);

}  // namespace cfx
