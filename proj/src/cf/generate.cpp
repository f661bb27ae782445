#include "cfx/cf/generate.hpp"

namespace cfx {

Optimizer resolve_optimizer(const CFQuery& query, const TrainedModel& model) {
  if (query.optimizer != Optimizer::Auto) return query.optimizer;
  return model.kind() == ModelKind::Logistic && query.k == 1 ? Optimizer::Gradient : Optimizer::Evolutionary;
}

CounterfactualSet generate_counterfactuals(const CFQuery& query, const TrainedModel& model) {
  if (resolve_optimizer(query, model) == Optimizer::Gradient) return generate_single_cf(query, model);
  return generate_diverse_cfs(query, model);
}

}  // namespace cfx
