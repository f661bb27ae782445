#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cfx/tabular/schema.hpp"

namespace cfx {

// Ordinal items count as categorical (mismatch indicator) by default, or as
// continuous (MAD-normalised absolute difference) on request.
enum class DistanceMode { OrdinalAsCategorical, OrdinalAsContinuous };

std::string to_string(DistanceMode mode);
DistanceMode parse_distance_mode(const std::string& text);

// Optional explicit weights for the two parts. Unset means 1 for a part with
// features and 0 for an empty part; setting a non-zero weight on an empty
// part is a ModeMismatch.
struct PartWeights {
  std::optional<double> continuous;
  std::optional<double> categorical;
};

// dist(a, b) = w_cont/d_cont * sum_cont |a_p - b_p| / MAD_p
//            + w_cat/d_cat  * sum_cat  [a_p != b_p]
class DistanceMetric {
 public:
  DistanceMetric(const FeatureSchema& schema, std::vector<double> mads,
                 DistanceMode mode = DistanceMode::OrdinalAsCategorical, PartWeights weights = {});

  double operator()(std::span<const double> a, std::span<const double> b) const;
  double operator()(const Instance& a, const Instance& b) const {
    return (*this)(std::span<const double>(a.values), std::span<const double>(b.values));
  }

  DistanceMode mode() const noexcept { return mode_; }
  bool in_continuous_part(std::size_t feature) const { return continuous_.at(feature); }
  std::size_t continuous_count() const noexcept { return n_cont_; }
  std::size_t categorical_count() const noexcept { return n_cat_; }
  // Per-feature coefficient: w_part / d_part, divided by MAD for continuous-part features.
  double coefficient(std::size_t feature) const { return coefficient_.at(feature); }
  const std::vector<double>& mads() const noexcept { return mads_; }

 private:
  DistanceMode mode_;
  std::vector<double> mads_;
  std::vector<bool> continuous_;
  std::vector<double> coefficient_;
  std::size_t n_cont_ = 0;
  std::size_t n_cat_ = 0;
};

double distance(const Instance& a, const Instance& b, const FeatureSchema& schema,
                std::span<const double> mads, DistanceMode mode = DistanceMode::OrdinalAsCategorical);

}  // namespace cfx
