#pragma once

#include "cfx/cf/counterfactual.hpp"

namespace cfx {

// Walks the changed features in decreasing |delta| order (ties by ascending
// feature index) and reverts each one to the origin value whenever the
// prediction stays on the target class. An invalid input is returned as is.
// `probability` is updated to the prediction of the returned instance.
Instance sparsity_pass(const Instance& cf, const Instance& origin, Label target, CountingModel& model,
                       double& probability);

Counterfactual sparsity_pass(const Counterfactual& cf, const Instance& origin, Label target,
                             const TrainedModel& model, const DistanceMetric& metric);

}  // namespace cfx
