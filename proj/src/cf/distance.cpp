#include "cfx/cf/distance.hpp"

#include <cmath>

#include "cfx/error.hpp"

namespace cfx {

std::string to_string(DistanceMode mode) {
  return mode == DistanceMode::OrdinalAsCategorical ? "ordinal_as_categorical" : "ordinal_as_continuous";
}

DistanceMode parse_distance_mode(const std::string& text) {
  if (text == "ordinal_as_categorical" || text == "categorical") return DistanceMode::OrdinalAsCategorical;
  if (text == "ordinal_as_continuous" || text == "continuous") return DistanceMode::OrdinalAsContinuous;
  throw Error(ErrorKind::BadConfig, "unknown distance mode '" + text + "'");
}

DistanceMetric::DistanceMetric(const FeatureSchema& schema, std::vector<double> mads, DistanceMode mode,
                               PartWeights weights)
    : mode_(mode), mads_(std::move(mads)) {
  if (mads_.size() != schema.size())
    throw Error(ErrorKind::BadConfig, "need one MAD per feature, got " + std::to_string(mads_.size()));
  continuous_.resize(schema.size());
  for (std::size_t f = 0; f < schema.size(); ++f) {
    const auto& spec = schema.feature(f);
    continuous_[f] = spec.kind == FeatureKind::Continuous || mode == DistanceMode::OrdinalAsContinuous;
    if (continuous_[f]) {
      if (!(mads_[f] > 0) || !std::isfinite(mads_[f]))
        throw Error(ErrorKind::BadConfig, "MAD must be positive", spec.name);
      ++n_cont_;
    } else {
      ++n_cat_;
    }
  }
  auto resolve = [](std::optional<double> w, std::size_t count, const char* part) {
    if (count == 0) {
      if (w && *w != 0.0)
        throw Error(ErrorKind::ModeMismatch, std::string("non-zero weight on the empty ") + part + " part");
      return 0.0;
    }
    return w.value_or(1.0);
  };
  const double w_cont = resolve(weights.continuous, n_cont_, "continuous");
  const double w_cat = resolve(weights.categorical, n_cat_, "categorical");

  coefficient_.resize(schema.size());
  for (std::size_t f = 0; f < schema.size(); ++f) {
    coefficient_[f] = continuous_[f] ? w_cont / static_cast<double>(n_cont_) / mads_[f]
                                     : w_cat / static_cast<double>(n_cat_);
  }
}

double DistanceMetric::operator()(std::span<const double> a, std::span<const double> b) const {
  double d = 0.0;
  for (std::size_t f = 0; f < continuous_.size(); ++f) {
    if (continuous_[f])
      d += coefficient_[f] * std::fabs(a[f] - b[f]);
    else if (a[f] != b[f])
      d += coefficient_[f];
  }
  return d;
}

double distance(const Instance& a, const Instance& b, const FeatureSchema& schema,
                std::span<const double> mads, DistanceMode mode) {
  return DistanceMetric(schema, {mads.begin(), mads.end()}, mode)(a, b);
}

}  // namespace cfx
