#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cfx/cf/distance.hpp"
#include "cfx/tabular/dataset.hpp"

namespace cfx {

// max(0, 1 - z * probability) with z = -1 for target 0 and +1 for target 1.
// For target 0 the floor is 1, but the loss still falls as the probability
// falls, which is all the optimisers need.
double hinge_loss(double probability, Label target_class);

// Row-major square matrix.
struct SquareMatrix {
  std::size_t n = 0;
  std::vector<double> data;

  explicit SquareMatrix(std::size_t size) : n(size), data(size * size, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return data[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * n + j]; }
};

// LU with partial pivoting.
double determinant(SquareMatrix m);

// K_ij = 1 / (1 + dist(X'_i, X'_j))
SquareMatrix dpp_kernel(std::span<const Instance> cfs, const DistanceMetric& metric);

// det(K); 1 for a single CF, 0 whenever two CFs coincide.
double dpp_diversity(std::span<const Instance> cfs, const DistanceMetric& metric);

// (1/k) sum hinge_i + (lambda1/k) sum dist_i - lambda2 * dpp
double dice_objective(std::span<const double> hinge_losses, std::span<const double> distances,
                      double lambda1, double lambda2, double dpp);

// Full objective for a candidate set given the model's probabilities for it.
double dice_objective(std::span<const Instance> cfs, std::span<const double> probabilities,
                      const Instance& origin, Label target_class, double lambda1, double lambda2,
                      const DistanceMetric& metric);

}  // namespace cfx
