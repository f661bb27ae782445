#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace cfx {

enum class FeatureKind { Ordinal, Continuous };

struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::Ordinal;
  int max_level = 1;          // ordinal only; levels are 0..max_level
  double min = 0.0;           // continuous only
  double max = 1.0;           // continuous only
  bool default_mutable = true;
  std::string description;

  int level_count() const noexcept { return max_level + 1; }
  double lower() const noexcept { return kind == FeatureKind::Ordinal ? 0.0 : min; }
  double upper() const noexcept {
    return kind == FeatureKind::Ordinal ? static_cast<double>(max_level) : max;
  }
};

// A patient's symptom vector, one value per schema feature in schema order.
struct Instance {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const noexcept { return values[i]; }
  double& operator[](std::size_t i) noexcept { return values[i]; }
  bool operator==(const Instance&) const = default;
};

class FeatureSchema {
 public:
  FeatureSchema() = default;
  // Throws Error{InvalidSchema} when the invariants do not hold.
  FeatureSchema(std::vector<FeatureSpec> features, std::string label_name = "label",
                std::string positive_label_meaning = "SNRI");

  const std::vector<FeatureSpec>& features() const noexcept { return features_; }
  const FeatureSpec& feature(std::size_t i) const { return features_.at(i); }
  std::size_t size() const noexcept { return features_.size(); }
  const std::string& label_name() const noexcept { return label_name_; }
  const std::string& positive_label_meaning() const noexcept { return positive_label_meaning_; }

  std::optional<std::size_t> find(std::string_view name) const;
  // Throws Error{BadConfig} for unknown names.
  std::size_t index_of(std::string_view name) const;

  // Throws OutOfRangeValue / NonIntegerOrdinal / InvalidInstance naming the feature.
  void validate(const Instance& instance, std::optional<std::size_t> row = std::nullopt) const;
  bool is_valid(const Instance& instance) const noexcept;

  // Stable 16-hex-digit digest of the canonical JSON form.
  std::string fingerprint() const;

  bool operator==(const FeatureSchema&) const;

 private:
  std::vector<FeatureSpec> features_;
  std::string label_name_ = "label";
  std::string positive_label_meaning_ = "SNRI";
};

// 17-item HAM-D layout. Items 1,2,3,7,8,9,10,11,15 score 0-4, the rest 0-2.
FeatureSchema hamd17_schema();

// Clamp to range and snap ordinal entries to the nearest level.
Instance project_to_schema(const FeatureSchema& schema, std::span<const double> values);

void to_json(nlohmann::json& j, const FeatureSpec& spec);
void from_json(const nlohmann::json& j, FeatureSpec& spec);
void to_json(nlohmann::json& j, const FeatureSchema& schema);
void from_json(const nlohmann::json& j, FeatureSchema& schema);

FeatureSchema load_schema_json(const std::string& path);

}  // namespace cfx
