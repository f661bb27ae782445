#pragma once

#include <span>
#include <vector>

#include "cfx/cf/counterfactual.hpp"

namespace cfx {

// Loss + lambda * distance over the one-hot (relaxed) encoding of a logistic
// model's input:
//   hinge(sigmoid(w.e + b), target) + lambda * dist_relaxed(e, origin)
// where an ordinal slice contributes (1 - e[origin level]) in categorical mode
// and |sum_j j * e_j - origin| / MAD in continuous mode. Both agree with the
// exact distance on one-hot points.
class RelaxedObjective {
 public:
  RelaxedObjective(const LogisticModel& model, const OneHotEncoder& encoder, const DistanceMetric& metric,
                   const Instance& origin, Label target, double lambda);

  double value(std::span<const double> e) const;
  std::vector<double> gradient(std::span<const double> e) const;

  double lambda() const noexcept { return lambda_; }
  void set_lambda(double lambda) noexcept { lambda_ = lambda; }

 private:
  const LogisticModel& model_;
  const OneHotEncoder& encoder_;
  const DistanceMetric& metric_;
  const Instance& origin_;
  Label target_;
  double lambda_;
};

struct GradientParams {
  double learning_rate = 0.05;  // Adam step
  double beta1 = 0.9;
  double beta2 = 0.999;
  double stationarity_tol = 1e-7;
  int patience = 100;           // iterations without improvement once valid
  double lambda_decay = 0.5;    // applied to lambda when stalled while still invalid
};

// Single counterfactual (k = 1) for a logistic model. Each step the relaxed
// iterate is projected back onto the feasible box (ordinal slices onto the
// simplex, continuous values clamped, immutable slices reset) and its
// arg-max snap is checked for validity. The best valid snap is tightened
// toward the origin level by level, then passed through the sparsity pass.
// objective_value is hinge + lambda1 * distance of the returned CF.
// Throws Error{TargetEqualsPrediction|NoCounterfactualFound|BadQuery}.
CounterfactualSet generate_single_cf(const CFQuery& query, const TrainedModel& model,
                                     const GradientParams& params = {});

// Euclidean projection of v onto {x >= 0, sum x = 1}.
void project_to_simplex(std::span<double> v);

}  // namespace cfx
