#include "cfx/cf/sparsity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cfx {

Instance sparsity_pass(const Instance& cf, const Instance& origin, Label target, CountingModel& model,
                       double& probability) {
  if (class_of(probability) != target) return cf;
  std::vector<std::size_t> changed;
  for (std::size_t f = 0; f < cf.size(); ++f)
    if (cf[f] != origin[f]) changed.push_back(f);
  std::stable_sort(changed.begin(), changed.end(), [&](std::size_t a, std::size_t b) {
    return std::fabs(cf[a] - origin[a]) > std::fabs(cf[b] - origin[b]);
  });

  Instance out = cf;
  for (std::size_t f : changed) {
    const double kept = out[f];
    out[f] = origin[f];
    const double p = model(out);
    if (class_of(p) == target)
      probability = p;
    else
      out[f] = kept;
  }
  return out;
}

Counterfactual sparsity_pass(const Counterfactual& cf, const Instance& origin, Label target,
                             const TrainedModel& model, const DistanceMetric& metric) {
  CountingModel counting(model);
  double p = cf.predicted_probability;
  Instance reduced = sparsity_pass(cf.values, origin, target, counting, p);
  return make_counterfactual(std::move(reduced), p, origin, target, metric, model.schema());
}

}  // namespace cfx
