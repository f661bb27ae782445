#include "cfx/tabular/schema.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>

#include "cfx/error.hpp"

namespace cfx {

using nlohmann::json;

FeatureSchema::FeatureSchema(std::vector<FeatureSpec> features, std::string label_name,
                             std::string positive_label_meaning)
    : features_(std::move(features)),
      label_name_(std::move(label_name)),
      positive_label_meaning_(std::move(positive_label_meaning)) {
  if (features_.empty()) throw Error(ErrorKind::InvalidSchema, "schema has no features");
  if (label_name_.empty()) throw Error(ErrorKind::InvalidSchema, "label name is empty");
  std::set<std::string> seen;
  for (const auto& f : features_) {
    if (f.name.empty()) throw Error(ErrorKind::InvalidSchema, "feature name is empty");
    if (!seen.insert(f.name).second)
      throw Error(ErrorKind::InvalidSchema, "duplicate feature name", f.name);
    if (f.name == label_name_)
      throw Error(ErrorKind::InvalidSchema, "feature shares the label column name", f.name);
    if (f.kind == FeatureKind::Ordinal && f.max_level < 1)
      throw Error(ErrorKind::InvalidSchema, "ordinal feature needs at least 2 levels", f.name);
    if (f.kind == FeatureKind::Continuous && !(f.min < f.max))
      throw Error(ErrorKind::InvalidSchema, "continuous feature needs min < max", f.name);
  }
}

std::optional<std::size_t> FeatureSchema::find(std::string_view name) const {
  for (std::size_t i = 0; i < features_.size(); ++i)
    if (features_[i].name == name) return i;
  return std::nullopt;
}

std::size_t FeatureSchema::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw Error(ErrorKind::BadConfig, "unknown feature", std::string(name));
}

void FeatureSchema::validate(const Instance& instance, std::optional<std::size_t> row) const {
  if (instance.size() != features_.size())
    throw Error(ErrorKind::InvalidInstance,
                "expected " + std::to_string(features_.size()) + " values, got " +
                    std::to_string(instance.size()),
                std::nullopt, row);
  for (std::size_t i = 0; i < features_.size(); ++i) {
    const auto& f = features_[i];
    const double v = instance[i];
    if (!std::isfinite(v))
      throw Error(ErrorKind::OutOfRangeValue, "value is not finite", f.name, row);
    if (f.kind == FeatureKind::Ordinal) {
      if (v != std::floor(v))
        throw Error(ErrorKind::NonIntegerOrdinal, "ordinal value must be an integer", f.name, row);
      if (v < 0 || v > f.max_level)
        throw Error(ErrorKind::OutOfRangeValue,
                    "value " + std::to_string(static_cast<long long>(v)) + " outside [0, " +
                        std::to_string(f.max_level) + "]",
                    f.name, row);
    } else if (v < f.min || v > f.max) {
      throw Error(ErrorKind::OutOfRangeValue, "value outside continuous range", f.name, row);
    }
  }
}

bool FeatureSchema::is_valid(const Instance& instance) const noexcept {
  try {
    validate(instance);
    return true;
  } catch (const Error&) {
    return false;
  }
}

std::string FeatureSchema::fingerprint() const {
  const std::string canonical = json(*this).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool FeatureSchema::operator==(const FeatureSchema& other) const {
  return json(*this) == json(other);
}

FeatureSchema hamd17_schema() {
  static const char* const descriptions[17] = {
      "Depressed mood",
      "Feelings of guilt",
      "Suicidal thoughts or actions",
      "Insomnia-early (sleep onset delay)",
      "Insomnia-middle (mid-sleep wakening)",
      "Insomnia-late (early morning wakening)",
      "Work and activities",
      "Psychomotor retardation",
      "Psychomotor agitation",
      "Psychic anxiety",
      "Somatic anxiety",
      "Loss of appetite",
      "Tiredness/pain",
      "Loss of sexual interest",
      "Hypochondriasis",
      "Weight loss",
      "Lack of insight",
  };
  static const std::set<int> five_level = {1, 2, 3, 7, 8, 9, 10, 11, 15};
  std::vector<FeatureSpec> specs;
  for (int item = 1; item <= 17; ++item) {
    FeatureSpec s;
    char name[8];
    std::snprintf(name, sizeof name, "ham%02d", item);
    s.name = name;
    s.kind = FeatureKind::Ordinal;
    s.max_level = five_level.count(item) ? 4 : 2;
    s.default_mutable = true;
    s.description = descriptions[item - 1];
    specs.push_back(std::move(s));
  }
  return FeatureSchema(std::move(specs), "label", "SNRI");
}

Instance project_to_schema(const FeatureSchema& schema, std::span<const double> values) {
  Instance out;
  out.values.resize(schema.size());
  for (std::size_t i = 0; i < schema.size(); ++i) {
    const auto& f = schema.feature(i);
    double v = std::clamp(values[i], f.lower(), f.upper());
    if (f.kind == FeatureKind::Ordinal) v = std::round(v);
    out[i] = v;
  }
  return out;
}

void to_json(json& j, const FeatureSpec& spec) {
  j = json{{"name", spec.name},
           {"kind", spec.kind == FeatureKind::Ordinal ? "ordinal" : "continuous"},
           {"default_mutable", spec.default_mutable}};
  if (spec.kind == FeatureKind::Ordinal) {
    j["max_level"] = spec.max_level;
  } else {
    j["min"] = spec.min;
    j["max"] = spec.max;
  }
  if (!spec.description.empty()) j["description"] = spec.description;
}

void from_json(const json& j, FeatureSpec& spec) {
  spec.name = j.at("name").get<std::string>();
  const auto kind = j.value("kind", std::string("ordinal"));
  if (kind == "ordinal") {
    spec.kind = FeatureKind::Ordinal;
    spec.max_level = j.at("max_level").get<int>();
  } else if (kind == "continuous") {
    spec.kind = FeatureKind::Continuous;
    spec.min = j.at("min").get<double>();
    spec.max = j.at("max").get<double>();
  } else {
    throw Error(ErrorKind::InvalidSchema, "unknown feature kind '" + kind + "'", spec.name);
  }
  spec.default_mutable = j.value("default_mutable", true);
  spec.description = j.value("description", std::string());
}

void to_json(json& j, const FeatureSchema& schema) {
  j = json{{"features", schema.features()},
           {"label_name", schema.label_name()},
           {"positive_label_meaning", schema.positive_label_meaning()}};
}

void from_json(const json& j, FeatureSchema& schema) {
  schema = FeatureSchema(j.at("features").get<std::vector<FeatureSpec>>(),
                         j.value("label_name", std::string("label")),
                         j.value("positive_label_meaning", std::string("SNRI")));
}

FeatureSchema load_schema_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open schema file '" + path + "'");
  try {
    return json::parse(in).get<FeatureSchema>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidSchema, std::string("bad schema JSON: ") + e.what());
  }
}

}  // namespace cfx
