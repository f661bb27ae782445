#include "cfx/tabular/synth.hpp"

#include <cmath>
#include <random>

#include "cfx/error.hpp"

namespace cfx {

using nlohmann::json;

SynthConfig standard_synth_config() {
  SynthConfig c;
  c.rows = 2000;
  c.decisive = {{"ham01", 1.0}, {"ham09", 1.0}, {"ham13", 1.0}};
  c.threshold = 5.0;
  c.noise_rate = 0.1;
  c.schema = hamd17_schema();
  return c;
}

namespace {

void check(const SynthConfig& c) {
  if (c.decisive.empty()) throw Error(ErrorKind::BadConfig, "at least one decisive feature is required");
  if (!(c.noise_rate >= 0.0 && c.noise_rate < 0.5))
    throw Error(ErrorKind::BadConfig, "noise_rate must lie in [0, 0.5)");
  if (c.rows == 0) throw Error(ErrorKind::BadConfig, "rows must be >= 1");
  for (const auto& d : c.decisive) {
    if (!c.schema.find(d.feature)) throw Error(ErrorKind::BadConfig, "unknown decisive feature", d.feature);
    if (!std::isfinite(d.weight)) throw Error(ErrorKind::BadConfig, "weight is not finite", d.feature);
  }
}

}  // namespace

Label planted_rule(const SynthConfig& config, const Instance& instance) {
  double s = 0.0;
  for (const auto& d : config.decisive) s += d.weight * instance[config.schema.index_of(d.feature)];
  return s >= config.threshold ? 1 : 0;
}

Dataset synth_generate(const SynthConfig& config, std::uint64_t seed) {
  check(config);
  const auto& schema = config.schema;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Dataset data{schema, {}, {}};
  data.rows.reserve(config.rows);
  data.labels.reserve(config.rows);
  for (std::size_t r = 0; r < config.rows; ++r) {
    Instance x;
    x.values.resize(schema.size());
    for (std::size_t f = 0; f < schema.size(); ++f) {
      const auto& spec = schema.feature(f);
      if (spec.kind == FeatureKind::Ordinal) {
        std::uniform_int_distribution<int> level(0, spec.max_level);
        x[f] = level(rng);
      } else {
        x[f] = spec.min + (spec.max - spec.min) * unit(rng);
      }
    }
    Label y = planted_rule(config, x);
    if (unit(rng) < config.noise_rate) y = 1 - y;
    data.rows.push_back(std::move(x));
    data.labels.push_back(y);
  }
  return data;
}

void to_json(json& j, const SynthConfig& c) {
  json decisive = json::array();
  for (const auto& d : c.decisive) decisive.push_back({{"feature", d.feature}, {"weight", d.weight}});
  j = json{{"rows", c.rows},
           {"decisive", decisive},
           {"threshold", c.threshold},
           {"noise_rate", c.noise_rate},
           {"schema", c.schema}};
}

void from_json(const json& j, SynthConfig& c) {
  c = SynthConfig{};
  c.rows = j.value("rows", std::size_t{2000});
  c.decisive.clear();
  for (const auto& d : j.at("decisive"))
    c.decisive.push_back({d.at("feature").get<std::string>(), d.value("weight", 1.0)});
  c.threshold = j.at("threshold").get<double>();
  c.noise_rate = j.value("noise_rate", 0.0);
  if (j.contains("schema")) c.schema = j.at("schema").get<FeatureSchema>();
}

}  // namespace cfx
