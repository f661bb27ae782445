#include "cfx/cf/objective.hpp"

#include <algorithm>
#include <cmath>

#include "cfx/error.hpp"

namespace cfx {

double hinge_loss(double probability, Label target_class) {
  const double z = target_class == 0 ? -1.0 : 1.0;
  return std::max(0.0, 1.0 - z * probability);
}

double determinant(SquareMatrix m) {
  const std::size_t n = m.n;
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::fabs(m(r, c)) > std::fabs(m(pivot, c))) pivot = r;
    if (m(pivot, c) == 0.0) return 0.0;
    if (pivot != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(c, j), m(pivot, j));
      det = -det;
    }
    const double p = m(c, c);
    det *= p;
    for (std::size_t r = c + 1; r < n; ++r) {
      const double factor = m(r, c) / p;
      if (factor == 0.0) continue;
      for (std::size_t j = c; j < n; ++j) m(r, j) -= factor * m(c, j);
    }
  }
  return det;
}

SquareMatrix dpp_kernel(std::span<const Instance> cfs, const DistanceMetric& metric) {
  SquareMatrix k(cfs.size());
  for (std::size_t i = 0; i < cfs.size(); ++i) {
    k(i, i) = 1.0;
    for (std::size_t j = i + 1; j < cfs.size(); ++j) {
      const double v = 1.0 / (1.0 + metric(cfs[i], cfs[j]));
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

double dpp_diversity(std::span<const Instance> cfs, const DistanceMetric& metric) {
  if (cfs.empty()) throw Error(ErrorKind::BadQuery, "diversity needs at least one counterfactual");
  for (std::size_t i = 0; i < cfs.size(); ++i)
    for (std::size_t j = i + 1; j < cfs.size(); ++j)
      if (cfs[i] == cfs[j]) return 0.0;  // exact: two equal rows
  return determinant(dpp_kernel(cfs, metric));
}

double dice_objective(std::span<const double> hinge_losses, std::span<const double> distances,
                      double lambda1, double lambda2, double dpp) {
  if (hinge_losses.size() != distances.size() || hinge_losses.empty())
    throw Error(ErrorKind::LengthMismatch, "need k >= 1 hinge losses and k distances");
  const double k = static_cast<double>(hinge_losses.size());
  double hinge_sum = 0.0, dist_sum = 0.0;
  for (double h : hinge_losses) hinge_sum += h;
  for (double d : distances) dist_sum += d;
  return hinge_sum / k + lambda1 * dist_sum / k - lambda2 * dpp;
}

double dice_objective(std::span<const Instance> cfs, std::span<const double> probabilities,
                      const Instance& origin, Label target_class, double lambda1, double lambda2,
                      const DistanceMetric& metric) {
  if (cfs.size() != probabilities.size())
    throw Error(ErrorKind::LengthMismatch, "one probability per counterfactual required");
  std::vector<double> hinges, dists;
  hinges.reserve(cfs.size());
  dists.reserve(cfs.size());
  for (std::size_t i = 0; i < cfs.size(); ++i) {
    hinges.push_back(hinge_loss(probabilities[i], target_class));
    dists.push_back(metric(cfs[i], origin));
  }
  const double dpp = lambda2 != 0.0 ? dpp_diversity(cfs, metric) : 0.0;
  return dice_objective(hinges, dists, lambda1, lambda2, dpp);
}

}  // namespace cfx
