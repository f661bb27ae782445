#include "cfx/tabular/encoding.hpp"

#include "cfx/error.hpp"

namespace cfx {

OneHotEncoder::OneHotEncoder(const FeatureSchema& schema) : specs_(schema.features()) {
  slots_.reserve(specs_.size());
  for (std::size_t f = 0; f < specs_.size(); ++f) {
    const auto& spec = specs_[f];
    const std::size_t w =
        spec.kind == FeatureKind::Ordinal ? static_cast<std::size_t>(spec.level_count()) : 1;
    slots_.push_back({width_, w});
    for (std::size_t k = 0; k < w; ++k) {
      column_feature_.push_back(f);
      column_level_.push_back(spec.kind == FeatureKind::Ordinal ? static_cast<int>(k) : -1);
    }
    width_ += w;
  }
}

void OneHotEncoder::encode_into(std::span<const double> values, std::span<double> out) const {
  for (std::size_t f = 0; f < specs_.size(); ++f) {
    const auto& s = slots_[f];
    if (specs_[f].kind == FeatureKind::Continuous) {
      out[s.offset] = values[f];
      continue;
    }
    for (std::size_t k = 0; k < s.width; ++k) out[s.offset + k] = 0.0;
    out[s.offset + static_cast<std::size_t>(values[f])] = 1.0;
  }
}

EncodedInstance OneHotEncoder::encode(const Instance& instance) const {
  if (instance.size() != specs_.size())
    throw Error(ErrorKind::InvalidInstance, "instance length does not match schema");
  EncodedInstance enc;
  enc.bits.resize(width_);
  encode_into(instance.values, enc.bits);
  return enc;
}

Instance OneHotEncoder::decode(const EncodedInstance& enc) const {
  if (enc.size() != width_)
    throw Error(ErrorKind::WidthMismatch, "encoded width " + std::to_string(enc.size()) +
                                              ", expected " + std::to_string(width_));
  Instance out;
  out.values.resize(specs_.size());
  for (std::size_t f = 0; f < specs_.size(); ++f) {
    const auto& s = slots_[f];
    if (specs_[f].kind == FeatureKind::Continuous) {
      out[f] = enc.bits[s.offset];
      continue;
    }
    int active = -1;
    for (std::size_t k = 0; k < s.width; ++k) {
      const double b = enc.bits[s.offset + k];
      if (b == 1.0) {
        if (active >= 0) throw Error(ErrorKind::NotOneHot, "more than one active slot", specs_[f].name);
        active = static_cast<int>(k);
      } else if (b != 0.0) {
        throw Error(ErrorKind::NotOneHot, "slot value is neither 0 nor 1", specs_[f].name);
      }
    }
    if (active < 0) throw Error(ErrorKind::NotOneHot, "no active slot", specs_[f].name);
    out[f] = active;
  }
  return out;
}

std::vector<std::vector<double>> OneHotEncoder::encode_rows(const Dataset& data) const {
  std::vector<std::vector<double>> rows;
  rows.reserve(data.size());
  for (const auto& r : data.rows) rows.push_back(encode(r).bits);
  return rows;
}

EncodedInstance one_hot_encode(const Instance& instance, const FeatureSchema& schema) {
  schema.validate(instance);
  return OneHotEncoder(schema).encode(instance);
}

Instance decode_one_hot(const EncodedInstance& enc, const FeatureSchema& schema) {
  return OneHotEncoder(schema).decode(enc);
}

}  // namespace cfx
