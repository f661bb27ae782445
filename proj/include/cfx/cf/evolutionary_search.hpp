#pragma once

#include <cstddef>

#include "cfx/cf/counterfactual.hpp"

namespace cfx {

struct EvolutionParams {
  std::size_t population = 60;   // candidate k-sets
  int stagnation_limit = 25;     // generations without improvement before stopping
  std::size_t elites = 2;
  std::size_t tournament = 3;
  double crossover_rate = 0.7;
  double mutation_rate = 0.5;    // per member of a child set
  double continuous_step = 0.1;  // Gaussian sigma as a fraction of the feature range
};

// Model-agnostic search for k diverse counterfactuals minimising the DICE
// objective. Candidate sets start uniformly inside the feature ranges with
// immutable features pinned to the origin. After the search, invalid members
// are dropped and the rest go through the sparsity pass.
// Throws Error{TargetEqualsPrediction|NoCounterfactualFound|BadQuery}.
CounterfactualSet generate_diverse_cfs(const CFQuery& query, const TrainedModel& model,
                                       const EvolutionParams& params = {});

}  // namespace cfx
