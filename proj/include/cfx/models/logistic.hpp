#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "cfx/models/training_data.hpp"

namespace cfx {

double sigmoid(double z) noexcept;

class LogisticModel {
 public:
  LogisticModel() = default;
  LogisticModel(std::vector<double> weights, double bias);

  double logit(std::span<const double> x) const;
  double predict_proba(std::span<const double> x) const { return sigmoid(logit(x)); }

  const std::vector<double>& weights() const noexcept { return weights_; }
  double bias() const noexcept { return bias_; }
  std::size_t width() const noexcept { return weights_.size(); }

  bool operator==(const LogisticModel&) const = default;

 private:
  std::vector<double> weights_;
  double bias_ = 0.0;
};

struct LogisticParams {
  double learning_rate = 0.5;
  int epochs = 2000;
  double l2 = 1e-3;
};

struct LossAndGradient {
  double loss = 0.0;
  std::vector<double> grad_weights;
  double grad_bias = 0.0;
};

// Mean log-loss plus (l2 / 2) * ||w||^2; the bias is not penalised.
LossAndGradient logistic_objective(const LogisticModel& model, const EncodedDataset& data, double l2);

struct LogisticFit {
  LogisticModel model;
  std::vector<double> loss_history;  // one entry per accepted epoch, non-increasing
};

// Full-batch gradient descent. A step that would raise the loss is retried
// with half the step size. Throws Error{DivergedTraining} on non-finite loss.
LogisticFit fit_logistic_regression_traced(const EncodedDataset& data, const LogisticParams& params,
                                           std::uint64_t seed);
LogisticModel fit_logistic_regression(const EncodedDataset& data, const LogisticParams& params,
                                      std::uint64_t seed);

void to_json(nlohmann::json& j, const LogisticModel& model);
void from_json(const nlohmann::json& j, LogisticModel& model);

}  // namespace cfx
