#include "cfx/tabular/stats.hpp"

#include <algorithm>
#include <cmath>

#include "cfx/error.hpp"

namespace cfx {

double median(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::EmptyDataset, "median of an empty sequence");
  std::vector<double> v(values.begin(), values.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    m = 0.5 * (m + lower);
  }
  return m;
}

double raw_mad(std::span<const double> values) {
  const double m = median(values);
  std::vector<double> dev;
  dev.reserve(values.size());
  for (double x : values) dev.push_back(std::fabs(x - m));
  return median(dev);
}

double mad(const Dataset& data, std::string_view feature) {
  const std::size_t f = data.schema.index_of(feature);
  if (data.empty()) throw Error(ErrorKind::EmptyDataset, "MAD needs at least one row", std::string(feature));
  const double m = raw_mad(data.column(f));
  return m > 0.0 ? m : 1.0;
}

std::vector<double> feature_mads(const Dataset& data) {
  std::vector<double> out;
  out.reserve(data.schema.size());
  for (const auto& f : data.schema.features()) out.push_back(mad(data, f.name));
  return out;
}

}  // namespace cfx
