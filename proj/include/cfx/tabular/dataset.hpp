#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cfx/tabular/schema.hpp"

namespace cfx {

// Class labels: 0 = SSRI, 1 = SNRI.
using Label = int;

struct Dataset {
  FeatureSchema schema;
  std::vector<Instance> rows;
  std::vector<Label> labels;

  std::size_t size() const noexcept { return rows.size(); }
  bool empty() const noexcept { return rows.empty(); }

  // Throws when |rows| != |labels|, a row breaks the schema, or a label is not 0/1.
  void validate() const;

  std::vector<double> column(std::size_t feature) const;
  Dataset subset(std::span<const std::size_t> indices) const;
  std::size_t count_label(Label label) const;
};

// Header row must list the schema features in order followed by the label column.
Dataset load_csv(const std::string& path, const FeatureSchema& schema);
Dataset read_csv(std::istream& in, const FeatureSchema& schema);

void write_csv(std::ostream& out, const Dataset& data);
void save_csv(const std::string& path, const Dataset& data);

}  // namespace cfx
