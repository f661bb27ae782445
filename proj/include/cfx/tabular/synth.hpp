#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "cfx/tabular/dataset.hpp"

namespace cfx {

struct DecisiveFeature {
  std::string feature;
  double weight = 1.0;
};

// Noisy linear-threshold labelling rule over a few decisive items:
//   label = [sum_i weight_i * x_i >= threshold], flipped with prob. noise_rate.
struct SynthConfig {
  std::size_t rows = 2000;
  std::vector<DecisiveFeature> decisive;
  double threshold = 0.0;
  double noise_rate = 0.0;
  FeatureSchema schema = hamd17_schema();
};

// 2000 rows over the HAM-D-17 schema, noise 0.1, rule ham01 + ham09 + ham13 >= 5.
SynthConfig standard_synth_config();

Label planted_rule(const SynthConfig& config, const Instance& instance);

// Throws Error{BadConfig}.
Dataset synth_generate(const SynthConfig& config, std::uint64_t seed);

void to_json(nlohmann::json& j, const SynthConfig& config);
void from_json(const nlohmann::json& j, SynthConfig& config);

}  // namespace cfx
