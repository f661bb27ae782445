#pragma once

#include "cfx/cf/counterfactual.hpp"
#include "cfx/cf/evolutionary_search.hpp"
#include "cfx/cf/gradient_search.hpp"

namespace cfx {

// Optimizer::Auto picks the gradient path for a logistic model with k = 1 and
// the evolutionary search otherwise.
Optimizer resolve_optimizer(const CFQuery& query, const TrainedModel& model);

CounterfactualSet generate_counterfactuals(const CFQuery& query, const TrainedModel& model);

}  // namespace cfx
