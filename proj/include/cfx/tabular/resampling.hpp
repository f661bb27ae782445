#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cfx/tabular/dataset.hpp"

namespace cfx {

// SMOTE for ordinal/continuous rows. Synthetic rows x + u*(neighbour - x),
// u ~ U[0,1], are appended after the untouched originals; ordinal coordinates
// are rounded to the nearest level. The neighbour count is capped at
// minority size - 1. Throws Error{TooFewMinoritySamples} or Error{BadConfig}.
Dataset smote_oversample(const Dataset& data, int k_neighbors, std::uint64_t seed);

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
};

// Shuffled k-fold partition; the first n % k folds hold one extra row.
// Throws Error{BadFoldCount} unless 2 <= k <= n.
std::vector<Fold> kfold_split(std::size_t n_rows, int k, std::uint64_t seed);
std::vector<Fold> kfold_split(const Dataset& data, int k, std::uint64_t seed);

}  // namespace cfx
