#pragma once

#include <cstddef>
#include <vector>

#include "cfx/tabular/dataset.hpp"
#include "cfx/tabular/encoding.hpp"

namespace cfx {

// Row-major encoded design matrix with binary labels.
struct EncodedDataset {
  std::vector<std::vector<double>> rows;
  std::vector<Label> labels;
  std::size_t width = 0;

  std::size_t size() const noexcept { return rows.size(); }
};

inline EncodedDataset encode_dataset(const Dataset& data) {
  OneHotEncoder enc(data.schema);
  return {enc.encode_rows(data), data.labels, enc.width()};
}

}  // namespace cfx
