#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "cfx/tabular/dataset.hpp"

namespace cfx {

// Median of a copy of `values`; the mean of the two middle elements for even n.
double median(std::span<const double> values);

// Raw median absolute deviation (no consistency constant, no fallback).
double raw_mad(std::span<const double> values);

// MAD of one feature column. A zero MAD falls back to 1.0 so distance terms
// divided by it stay finite. Throws Error{EmptyDataset}.
double mad(const Dataset& data, std::string_view feature);

// mad() for every schema feature, in schema order.
std::vector<double> feature_mads(const Dataset& data);

}  // namespace cfx
