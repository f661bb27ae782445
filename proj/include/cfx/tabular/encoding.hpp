#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cfx/tabular/dataset.hpp"
#include "cfx/tabular/schema.hpp"

namespace cfx {

struct EncodedInstance {
  std::vector<double> bits;

  std::size_t size() const noexcept { return bits.size(); }
  bool operator==(const EncodedInstance&) const = default;
};

struct Slot {
  std::size_t offset = 0;
  std::size_t width = 0;
};

// One-hot layout for a schema: an ordinal feature with L levels owns L
// consecutive columns, a continuous feature owns one pass-through column.
class OneHotEncoder {
 public:
  explicit OneHotEncoder(const FeatureSchema& schema);

  std::size_t width() const noexcept { return width_; }
  const std::vector<Slot>& slots() const noexcept { return slots_; }
  const Slot& slot(std::size_t feature) const { return slots_.at(feature); }

  EncodedInstance encode(const Instance& instance) const;
  void encode_into(std::span<const double> values, std::span<double> out) const;
  // Throws Error{NotOneHot} when an ordinal slice does not hold exactly one 1.
  Instance decode(const EncodedInstance& enc) const;

  // Encoded column -> (feature, level); level is -1 for continuous columns.
  std::size_t feature_of(std::size_t column) const { return column_feature_.at(column); }
  int level_of(std::size_t column) const { return column_level_.at(column); }

  std::vector<std::vector<double>> encode_rows(const Dataset& data) const;

 private:
  std::vector<FeatureSpec> specs_;
  std::vector<Slot> slots_;
  std::vector<std::size_t> column_feature_;
  std::vector<int> column_level_;
  std::size_t width_ = 0;
};

EncodedInstance one_hot_encode(const Instance& instance, const FeatureSchema& schema);
Instance decode_one_hot(const EncodedInstance& enc, const FeatureSchema& schema);

}  // namespace cfx
