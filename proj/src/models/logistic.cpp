#include "cfx/models/logistic.hpp"

#include <cmath>
#include <random>

#include "cfx/error.hpp"

namespace cfx {

using nlohmann::json;

double sigmoid(double z) noexcept {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

LogisticModel::LogisticModel(std::vector<double> weights, double bias)
    : weights_(std::move(weights)), bias_(bias) {
  for (double w : weights_)
    if (!std::isfinite(w)) throw Error(ErrorKind::BadModel, "non-finite logistic weight");
  if (!std::isfinite(bias_)) throw Error(ErrorKind::BadModel, "non-finite logistic bias");
}

double LogisticModel::logit(std::span<const double> x) const {
  double z = bias_;
  for (std::size_t i = 0; i < weights_.size(); ++i) z += weights_[i] * x[i];
  return z;
}

namespace {

// log(1 + exp(z)) without overflow
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

void check_trainable(const EncodedDataset& data) {
  if (data.size() == 0) throw Error(ErrorKind::EmptyDataset, "cannot fit logistic regression on zero rows");
  std::size_t pos = 0;
  for (auto l : data.labels) pos += (l == 1);
  if (pos == 0 || pos == data.size())
    throw Error(ErrorKind::SingleClassLabels, "logistic regression needs both classes");
}

}  // namespace

LossAndGradient logistic_objective(const LogisticModel& model, const EncodedDataset& data, double l2) {
  const std::size_t n = data.size();
  const std::size_t w = model.width();
  LossAndGradient out;
  out.grad_weights.assign(w, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    const auto& x = data.rows[r];
    const double z = model.logit(x);
    const double y = data.labels[r];
    // -[y log s(z) + (1-y) log(1 - s(z))] = softplus(z) - y z
    out.loss += softplus(z) - y * z;
    const double residual = sigmoid(z) - y;
    for (std::size_t i = 0; i < w; ++i) out.grad_weights[i] += residual * x[i];
    out.grad_bias += residual;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  out.loss *= inv_n;
  out.grad_bias *= inv_n;
  double sq = 0.0;
  for (std::size_t i = 0; i < w; ++i) {
    const double wi = model.weights()[i];
    out.grad_weights[i] = out.grad_weights[i] * inv_n + l2 * wi;
    sq += wi * wi;
  }
  out.loss += 0.5 * l2 * sq;
  return out;
}

LogisticFit fit_logistic_regression_traced(const EncodedDataset& data, const LogisticParams& params,
                                           std::uint64_t seed) {
  check_trainable(data);
  if (!(params.learning_rate > 0) || params.epochs < 0 || !(params.l2 >= 0))
    throw Error(ErrorKind::BadConfig, "logistic regression needs learning_rate > 0, epochs >= 0, l2 >= 0");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> init(-1e-3, 1e-3);
  std::vector<double> w(data.width);
  for (auto& wi : w) wi = init(rng);

  LogisticFit fit{LogisticModel(w, 0.0), {}};
  auto current = logistic_objective(fit.model, data, params.l2);
  if (!std::isfinite(current.loss)) throw Error(ErrorKind::DivergedTraining, "initial loss is not finite");
  fit.loss_history.push_back(current.loss);

  double step = params.learning_rate;
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    bool accepted = false;
    for (int halving = 0; halving < 60 && !accepted; ++halving) {
      std::vector<double> next_w = fit.model.weights();
      for (std::size_t i = 0; i < next_w.size(); ++i) next_w[i] -= step * current.grad_weights[i];
      const double next_b = fit.model.bias() - step * current.grad_bias;
      bool finite = std::isfinite(next_b);
      for (double v : next_w) finite = finite && std::isfinite(v);
      if (!finite) throw Error(ErrorKind::DivergedTraining, "weights became non-finite at epoch " + std::to_string(epoch));
      LogisticModel candidate(std::move(next_w), next_b);
      auto next = logistic_objective(candidate, data, params.l2);
      if (!std::isfinite(next.loss))
        throw Error(ErrorKind::DivergedTraining, "loss became non-finite at epoch " + std::to_string(epoch));
      if (next.loss <= current.loss) {
        fit.model = std::move(candidate);
        current = std::move(next);
        accepted = true;
      } else {
        step *= 0.5;
      }
    }
    if (!accepted) break;  // step underflowed: at a minimum to machine precision
    fit.loss_history.push_back(current.loss);
  }
  return fit;
}

LogisticModel fit_logistic_regression(const EncodedDataset& data, const LogisticParams& params,
                                      std::uint64_t seed) {
  return fit_logistic_regression_traced(data, params, seed).model;
}

void to_json(json& j, const LogisticModel& model) {
  j = json{{"weights", model.weights()}, {"bias", model.bias()}};
}

void from_json(const json& j, LogisticModel& model) {
  model = LogisticModel(j.at("weights").get<std::vector<double>>(), j.at("bias").get<double>());
}

}  // namespace cfx
