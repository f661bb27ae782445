#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "cfx/cf/distance.hpp"
#include "cfx/models/model.hpp"

namespace cfx {

enum class Optimizer { Auto, Gradient, Evolutionary };

std::string to_string(Optimizer o);
Optimizer parse_optimizer(const std::string& text);

struct CFQuery {
  Instance origin;
  Label target_class = 1;
  int k = 1;
  std::vector<std::string> immutable;
  double lambda1 = 0.5;
  double lambda2 = 1.0;
  Optimizer optimizer = Optimizer::Auto;
  std::uint64_t seed = 0;
  std::size_t budget = 20000;  // model evaluations
  DistanceMode distance_mode = DistanceMode::OrdinalAsCategorical;
};

struct DiffEntry {
  std::string feature;
  double old_value = 0.0;
  double new_value = 0.0;
  double delta = 0.0;  // new - old
  bool operator==(const DiffEntry&) const = default;
};

struct Counterfactual {
  Instance values;
  double predicted_probability = 0.0;
  bool valid = false;
  double distance_to_origin = 0.0;
  std::vector<DiffEntry> diff;
};

struct CounterfactualSet {
  CFQuery query;
  std::vector<Counterfactual> cfs;
  double objective_value = 0.0;
  std::size_t evaluations_used = 0;
  bool partial = false;  // 0 < |cfs| < k
};

// Throws Error{BadQuery} naming the problem field, or the schema's instance errors.
void validate_query(const CFQuery& query, const FeatureSchema& schema);

// Mask over schema features: query.immutable plus features whose spec is not
// default_mutable.
std::vector<bool> immutable_mask(const CFQuery& query, const FeatureSchema& schema);

// Model predictions with a running evaluation count, shared by the optimisers
// so the budget covers every model call they make.
class CountingModel {
 public:
  explicit CountingModel(const TrainedModel& model) : model_(model) {}
  double operator()(const Instance& x) {
    ++calls_;
    return model_.predict_instance(x);
  }
  // Book evaluations spent outside operator(), e.g. on a relaxed input.
  void charge(std::size_t n = 1) noexcept { calls_ += n; }
  std::size_t calls() const noexcept { return calls_; }
  const TrainedModel& model() const noexcept { return model_; }

 private:
  const TrainedModel& model_;
  std::size_t calls_ = 0;
};

std::vector<DiffEntry> diff_of(const Instance& origin, const Instance& cf, const FeatureSchema& schema);

Counterfactual make_counterfactual(Instance values, double probability, const Instance& origin,
                                   Label target, const DistanceMetric& metric, const FeatureSchema& schema);

// Objective of a set of instances under the query's lambdas and the model.
double dice_objective(std::span<const Instance> cfs, const CFQuery& query, const TrainedModel& model);

DistanceMetric metric_for(const CFQuery& query, const TrainedModel& model);

void to_json(nlohmann::json& j, const CFQuery& q);
// Schema needed to resolve named values; see query_from_json.
CFQuery query_from_json(const nlohmann::json& j, const FeatureSchema& schema);
void to_json(nlohmann::json& j, const DiffEntry& d);
void to_json(nlohmann::json& j, const Counterfactual& cf);
void to_json(nlohmann::json& j, const CounterfactualSet& set);

// Accepts either an array in schema order or an object keyed by feature name.
// Throws Error{InvalidInstance|OutOfRangeValue|NonIntegerOrdinal}.
Instance instance_from_json(const nlohmann::json& j, const FeatureSchema& schema);

}  // namespace cfx
