#include "cfx/cf/counterfactual.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>

#include "cfx/cf/objective.hpp"
#include "cfx/error.hpp"

namespace cfx {

using nlohmann::json;

std::string to_string(Optimizer o) {
  switch (o) {
    case Optimizer::Auto: return "auto";
    case Optimizer::Gradient: return "gradient";
    case Optimizer::Evolutionary: return "evolutionary";
  }
  return "auto";
}

Optimizer parse_optimizer(const std::string& text) {
  if (text == "auto") return Optimizer::Auto;
  if (text == "gradient") return Optimizer::Gradient;
  if (text == "evolutionary") return Optimizer::Evolutionary;
  throw Error(ErrorKind::BadQuery, "unknown optimizer '" + text + "'", "optimizer");
}

void validate_query(const CFQuery& q, const FeatureSchema& schema) {
  schema.validate(q.origin);
  if (q.target_class != 0 && q.target_class != 1)
    throw Error(ErrorKind::BadQuery, "target_class must be 0 or 1", "target_class");
  if (q.k < 1) throw Error(ErrorKind::BadQuery, "k must be >= 1", "k");
  if (!(q.lambda1 >= 0) || !std::isfinite(q.lambda1))
    throw Error(ErrorKind::BadQuery, "lambda1 must be a finite value >= 0", "lambda1");
  if (!(q.lambda2 >= 0) || !std::isfinite(q.lambda2))
    throw Error(ErrorKind::BadQuery, "lambda2 must be a finite value >= 0", "lambda2");
  if (q.budget == 0) throw Error(ErrorKind::BadQuery, "budget must be >= 1", "budget");
  for (const auto& name : q.immutable)
    if (!schema.find(name)) throw Error(ErrorKind::BadQuery, "unknown immutable feature '" + name + "'", name);
}

std::vector<bool> immutable_mask(const CFQuery& q, const FeatureSchema& schema) {
  std::vector<bool> mask(schema.size(), false);
  for (std::size_t f = 0; f < schema.size(); ++f) mask[f] = !schema.feature(f).default_mutable;
  for (const auto& name : q.immutable) mask[schema.index_of(name)] = true;
  return mask;
}

std::vector<DiffEntry> diff_of(const Instance& origin, const Instance& cf, const FeatureSchema& schema) {
  std::vector<DiffEntry> d;
  for (std::size_t f = 0; f < schema.size(); ++f)
    if (cf[f] != origin[f]) d.push_back({schema.feature(f).name, origin[f], cf[f], cf[f] - origin[f]});
  return d;
}

Counterfactual make_counterfactual(Instance values, double probability, const Instance& origin,
                                   Label target, const DistanceMetric& metric, const FeatureSchema& schema) {
  Counterfactual cf;
  cf.predicted_probability = probability;
  cf.valid = class_of(probability) == target;
  cf.distance_to_origin = metric(values, origin);
  cf.diff = diff_of(origin, values, schema);
  cf.values = std::move(values);
  return cf;
}

DistanceMetric metric_for(const CFQuery& q, const TrainedModel& model) {
  return DistanceMetric(model.schema(), model.mads(), q.distance_mode);
}

double dice_objective(std::span<const Instance> cfs, const CFQuery& q, const TrainedModel& model) {
  std::vector<double> probs;
  probs.reserve(cfs.size());
  for (const auto& x : cfs) probs.push_back(model.predict_instance(x));
  return dice_objective(cfs, probs, q.origin, q.target_class, q.lambda1, q.lambda2, metric_for(q, model));
}

void to_json(json& j, const CFQuery& q) {
  auto immutable = q.immutable;
  std::sort(immutable.begin(), immutable.end());
  j = json{{"origin", q.origin.values},
           {"target_class", q.target_class},
           {"k", q.k},
           {"immutable", immutable},
           {"lambda1", q.lambda1},
           {"lambda2", q.lambda2},
           {"optimizer", to_string(q.optimizer)},
           {"seed", q.seed},
           {"budget", q.budget},
           {"distance_mode", to_string(q.distance_mode)}};
}

Instance instance_from_json(const json& j, const FeatureSchema& schema) {
  Instance x;
  x.values.resize(schema.size());
  auto number = [&](const json& v, const std::string& name) {
    if (!v.is_number()) throw Error(ErrorKind::InvalidInstance, "value must be a number", name);
    return v.get<double>();
  };
  if (j.is_array()) {
    if (j.size() != schema.size())
      throw Error(ErrorKind::InvalidInstance, "expected " + std::to_string(schema.size()) + " values, got " +
                                                  std::to_string(j.size()), "values");
    for (std::size_t f = 0; f < schema.size(); ++f) x[f] = number(j[f], schema.feature(f).name);
  } else if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      if (!schema.find(it.key())) throw Error(ErrorKind::InvalidInstance, "unknown feature", it.key());
    for (std::size_t f = 0; f < schema.size(); ++f) {
      const auto& name = schema.feature(f).name;
      if (!j.contains(name)) throw Error(ErrorKind::InvalidInstance, "missing value", name);
      x[f] = number(j.at(name), name);
    }
  } else {
    throw Error(ErrorKind::InvalidInstance, "values must be an array or an object", "values");
  }
  schema.validate(x);
  return x;
}

CFQuery query_from_json(const json& j, const FeatureSchema& schema) {
  if (!j.is_object()) throw Error(ErrorKind::BadQuery, "query must be a JSON object");
  CFQuery q;
  const char* origin_key = j.contains("origin") ? "origin" : "values";
  if (!j.contains(origin_key)) throw Error(ErrorKind::BadQuery, "missing instance values", "values");
  q.origin = instance_from_json(j.at(origin_key), schema);
  auto get_int = [&](const char* key, auto fallback) {
    using T = decltype(fallback);
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_number_integer() || (std::is_unsigned_v<T> && !v.is_number_unsigned()))
      throw Error(ErrorKind::BadQuery, "must be a non-negative integer", key);
    return v.get<T>();
  };
  auto get_real = [&](const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw Error(ErrorKind::BadQuery, "must be a number", key);
    return j.at(key).get<double>();
  };
  q.target_class = get_int("target_class", 1);
  q.k = get_int("k", 1);
  q.lambda1 = get_real("lambda1", q.lambda1);
  q.lambda2 = get_real("lambda2", q.lambda2);
  q.seed = get_int("seed", std::uint64_t{0});
  q.budget = get_int("budget", q.budget);
  if (j.contains("immutable")) {
    const auto& im = j.at("immutable");
    if (!im.is_array()) throw Error(ErrorKind::BadQuery, "must be an array of feature names", "immutable");
    for (const auto& name : im) {
      if (!name.is_string()) throw Error(ErrorKind::BadQuery, "must be an array of feature names", "immutable");
      q.immutable.push_back(name.get<std::string>());
    }
  }
  if (j.contains("optimizer")) {
    if (!j.at("optimizer").is_string()) throw Error(ErrorKind::BadQuery, "must be a string", "optimizer");
    q.optimizer = parse_optimizer(j.at("optimizer").get<std::string>());
  }
  if (j.contains("distance_mode")) {
    try {
      q.distance_mode = parse_distance_mode(j.at("distance_mode").get<std::string>());
    } catch (const std::exception&) {
      throw Error(ErrorKind::BadQuery, "unknown distance mode", "distance_mode");
    }
  }
  validate_query(q, schema);
  return q;
}

void to_json(json& j, const DiffEntry& d) {
  j = json{{"feature", d.feature}, {"old", d.old_value}, {"new", d.new_value}, {"delta", d.delta}};
}

void to_json(json& j, const Counterfactual& cf) {
  j = json{{"values", cf.values.values},
           {"predicted_probability", cf.predicted_probability},
           {"valid", cf.valid},
           {"distance_to_origin", cf.distance_to_origin},
           {"diff", cf.diff}};
}

void to_json(json& j, const CounterfactualSet& s) {
  j = json{{"query", s.query},
           {"cfs", s.cfs},
           {"objective_value", s.objective_value},
           {"evaluations_used", s.evaluations_used},
           {"partial", s.partial}};
}

}  // namespace cfx
