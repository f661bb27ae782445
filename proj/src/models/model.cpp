#include "cfx/models/model.hpp"

#include <fstream>

#include "cfx/error.hpp"
#include "cfx/tabular/resampling.hpp"
#include "cfx/tabular/stats.hpp"

namespace cfx {

using nlohmann::json;

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::DecisionTree: return "tree";
    case ModelKind::RandomForest: return "forest";
    case ModelKind::Logistic: return "logistic";
  }
  return "unknown";
}

ModelKind parse_model_kind(const std::string& text) {
  if (text == "tree" || text == "decision_tree") return ModelKind::DecisionTree;
  if (text == "forest" || text == "random_forest") return ModelKind::RandomForest;
  if (text == "logistic" || text == "logistic_regression") return ModelKind::Logistic;
  throw Error(ErrorKind::BadConfig, "unknown model kind '" + text + "'");
}

namespace {

std::size_t classifier_width(const Classifier& c) {
  return std::visit([](const auto& m) { return m.width(); }, c);
}

}  // namespace

TrainedModel::TrainedModel(FeatureSchema schema, std::vector<double> mads, Classifier classifier)
    : schema_(std::move(schema)), encoder_(schema_), mads_(std::move(mads)), classifier_(std::move(classifier)) {
  if (mads_.size() != schema_.size())
    throw Error(ErrorKind::BadModel, "need one MAD per schema feature");
  for (double m : mads_)
    if (!(m > 0)) throw Error(ErrorKind::BadModel, "MADs must be positive");
  if (classifier_width(classifier_) != encoder_.width())
    throw Error(ErrorKind::WidthMismatch, "classifier width " + std::to_string(classifier_width(classifier_)) +
                                              " does not match encoded schema width " +
                                              std::to_string(encoder_.width()));
}

ModelKind TrainedModel::kind() const noexcept {
  switch (classifier_.index()) {
    case 0: return ModelKind::DecisionTree;
    case 1: return ModelKind::RandomForest;
    default: return ModelKind::Logistic;
  }
}

double TrainedModel::predict_encoded(std::span<const double> x) const {
  return std::visit([&](const auto& m) { return m.predict_proba(x); }, classifier_);
}

double TrainedModel::predict_proba(const EncodedInstance& x) const {
  if (x.size() != encoder_.width())
    throw Error(ErrorKind::WidthMismatch, "encoded width " + std::to_string(x.size()) + ", model expects " +
                                              std::to_string(encoder_.width()));
  return predict_encoded(x.bits);
}

double TrainedModel::predict_instance(const Instance& x) const {
  if (x.size() != schema_.size())
    throw Error(ErrorKind::InvalidInstance, "instance length does not match schema");
  thread_local std::vector<double> buffer;
  buffer.assign(encoder_.width(), 0.0);
  encoder_.encode_into(x.values, buffer);
  return predict_encoded(buffer);
}

TrainedModel train_model(const Dataset& data, const ModelConfig& config, std::uint64_t seed) {
  if (data.empty()) throw Error(ErrorKind::EmptyDataset, "training set is empty");
  auto mads = feature_mads(data);
  const Dataset balanced = config.smote ? smote_oversample(data, config.smote_k, seed) : data;
  const EncodedDataset enc = encode_dataset(balanced);
  switch (config.kind) {
    case ModelKind::DecisionTree:
      return {data.schema, std::move(mads), fit_decision_tree(enc, config.tree, seed)};
    case ModelKind::RandomForest:
      return {data.schema, std::move(mads), fit_random_forest(enc, config.forest, seed)};
    case ModelKind::Logistic:
      return {data.schema, std::move(mads), fit_logistic_regression(enc, config.logistic, seed)};
  }
  throw Error(ErrorKind::BadConfig, "unsupported model kind");
}

json model_to_json(const TrainedModel& model) {
  json params;
  std::visit([&](const auto& m) { params = m; }, model.classifier());
  return json{{"model_kind", to_string(model.kind())},
              {"schema_fingerprint", model.schema().fingerprint()},
              {"schema", model.schema()},
              {"mads", model.mads()},
              {"parameters", std::move(params)}};
}

TrainedModel model_from_json(const json& j) {
  try {
    auto schema = j.at("schema").get<FeatureSchema>();
    const auto fp = j.at("schema_fingerprint").get<std::string>();
    if (fp != schema.fingerprint())
      throw Error(ErrorKind::SchemaMismatch, "schema fingerprint " + fp + " does not match embedded schema");
    auto mads = j.at("mads").get<std::vector<double>>();
    const auto& p = j.at("parameters");
    switch (parse_model_kind(j.at("model_kind").get<std::string>())) {
      case ModelKind::DecisionTree: return {std::move(schema), std::move(mads), p.get<DecisionTree>()};
      case ModelKind::RandomForest: return {std::move(schema), std::move(mads), p.get<RandomForest>()};
      case ModelKind::Logistic: return {std::move(schema), std::move(mads), p.get<LogisticModel>()};
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::BadModel, std::string("malformed model JSON: ") + e.what());
  }
  throw Error(ErrorKind::BadModel, "unsupported model kind");
}

void save_model(const std::string& path, const TrainedModel& model) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  out << model_to_json(model).dump() << '\n';
}

TrainedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::BadModel, std::string("model file is not JSON: ") + e.what());
  }
  return model_from_json(j);
}

void to_json(json& j, const ModelConfig& c) {
  j = json{{"model_kind", to_string(c.kind)},
           {"tree", {{"max_depth", c.tree.max_depth}, {"min_leaf", c.tree.min_leaf},
                     {"feature_subsample", c.tree.feature_subsample}}},
           {"forest", {{"n_trees", c.forest.n_trees}, {"max_depth", c.forest.max_depth},
                       {"min_leaf", c.forest.min_leaf}, {"bootstrap", c.forest.bootstrap}}},
           {"logistic", {{"learning_rate", c.logistic.learning_rate}, {"epochs", c.logistic.epochs},
                         {"l2", c.logistic.l2}}},
           {"smote", c.smote},
           {"smote_k", c.smote_k}};
  j["forest"]["feature_subsample"] =
      c.forest.feature_subsample ? json(*c.forest.feature_subsample) : json(nullptr);
}

void from_json(const json& j, ModelConfig& c) {
  c = ModelConfig{};
  if (j.contains("model_kind")) c.kind = parse_model_kind(j["model_kind"].get<std::string>());
  if (j.contains("tree")) {
    const auto& t = j["tree"];
    c.tree.max_depth = t.value("max_depth", c.tree.max_depth);
    c.tree.min_leaf = t.value("min_leaf", c.tree.min_leaf);
    c.tree.feature_subsample = t.value("feature_subsample", c.tree.feature_subsample);
  }
  if (j.contains("forest")) {
    const auto& f = j["forest"];
    c.forest.n_trees = f.value("n_trees", c.forest.n_trees);
    c.forest.max_depth = f.value("max_depth", c.forest.max_depth);
    c.forest.min_leaf = f.value("min_leaf", c.forest.min_leaf);
    c.forest.bootstrap = f.value("bootstrap", c.forest.bootstrap);
    if (f.contains("feature_subsample") && !f["feature_subsample"].is_null())
      c.forest.feature_subsample = f["feature_subsample"].get<double>();
  }
  if (j.contains("logistic")) {
    const auto& l = j["logistic"];
    c.logistic.learning_rate = l.value("learning_rate", c.logistic.learning_rate);
    c.logistic.epochs = l.value("epochs", c.logistic.epochs);
    c.logistic.l2 = l.value("l2", c.logistic.l2);
  }
  c.smote = j.value("smote", c.smote);
  c.smote_k = j.value("smote_k", c.smote_k);
}

}  // namespace cfx
