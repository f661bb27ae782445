#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "cfx/models/decision_tree.hpp"
#include "cfx/models/logistic.hpp"
#include "cfx/models/random_forest.hpp"
#include "cfx/tabular/dataset.hpp"
#include "cfx/tabular/encoding.hpp"

namespace cfx {

enum class ModelKind { DecisionTree, RandomForest, Logistic };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& text);  // "tree" | "forest" | "logistic"

// Probability >= 0.5 is class 1 (SNRI); an exact 0.5 counts as class 1.
constexpr Label class_of(double probability) noexcept { return probability >= 0.5 ? 1 : 0; }

using Classifier = std::variant<DecisionTree, RandomForest, LogisticModel>;

// A fitted classifier bundled with the schema it was trained against and the
// per-feature MADs of its training data. Immutable once built.
class TrainedModel {
 public:
  TrainedModel(FeatureSchema schema, std::vector<double> mads, Classifier classifier);

  ModelKind kind() const noexcept;
  const FeatureSchema& schema() const noexcept { return schema_; }
  const OneHotEncoder& encoder() const noexcept { return encoder_; }
  const std::vector<double>& mads() const noexcept { return mads_; }
  const Classifier& classifier() const noexcept { return classifier_; }
  const LogisticModel* as_logistic() const noexcept { return std::get_if<LogisticModel>(&classifier_); }

  // Throws Error{WidthMismatch}.
  double predict_proba(const EncodedInstance& x) const;
  double predict_encoded(std::span<const double> x) const;
  double predict_instance(const Instance& x) const;
  Label predict_class(const Instance& x) const { return class_of(predict_instance(x)); }

 private:
  FeatureSchema schema_;
  OneHotEncoder encoder_;
  std::vector<double> mads_;
  Classifier classifier_;
};

struct ModelConfig {
  ModelKind kind = ModelKind::RandomForest;
  TreeParams tree;
  ForestParams forest;
  LogisticParams logistic;
  bool smote = false;
  int smote_k = 5;
};

// Encodes, optionally balances with SMOTE, and fits. MADs come from the
// un-oversampled rows.
TrainedModel train_model(const Dataset& data, const ModelConfig& config, std::uint64_t seed);

// {model_kind, schema_fingerprint, schema, mads, parameters}
nlohmann::json model_to_json(const TrainedModel& model);
// Throws Error{SchemaMismatch} when the fingerprint does not match the schema.
TrainedModel model_from_json(const nlohmann::json& j);
void save_model(const std::string& path, const TrainedModel& model);
TrainedModel load_model(const std::string& path);

void to_json(nlohmann::json& j, const ModelConfig& config);
void from_json(const nlohmann::json& j, ModelConfig& config);

}  // namespace cfx
