#include "cfx/cf/gradient_search.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "cfx/cf/objective.hpp"
#include "cfx/cf/sparsity.hpp"
#include "cfx/error.hpp"

namespace cfx {

RelaxedObjective::RelaxedObjective(const LogisticModel& model, const OneHotEncoder& encoder,
                                   const DistanceMetric& metric, const Instance& origin, Label target,
                                   double lambda)
    : model_(model), encoder_(encoder), metric_(metric), origin_(origin), target_(target), lambda_(lambda) {}

namespace {

double slice_level(std::span<const double> e, const Slot& s) {
  double v = 0.0;
  for (std::size_t j = 0; j < s.width; ++j) v += static_cast<double>(j) * e[s.offset + j];
  return v;
}

double sign(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

}  // namespace

double RelaxedObjective::value(std::span<const double> e) const {
  double v = hinge_loss(model_.predict_proba(e), target_);
  double dist = 0.0;
  for (std::size_t f = 0; f < origin_.size(); ++f) {
    const auto& s = encoder_.slot(f);
    const double c = metric_.coefficient(f);
    const bool ordinal = encoder_.level_of(s.offset) >= 0;
    if (!ordinal)
      dist += c * std::fabs(e[s.offset] - origin_[f]);
    else if (metric_.in_continuous_part(f))
      dist += c * std::fabs(slice_level(e, s) - origin_[f]);
    else
      dist += c * (1.0 - e[s.offset + static_cast<std::size_t>(origin_[f])]);
  }
  return v + lambda_ * dist;
}

std::vector<double> RelaxedObjective::gradient(std::span<const double> e) const {
  std::vector<double> g(e.size(), 0.0);
  const double p = model_.predict_proba(e);
  const double z = target_ == 0 ? -1.0 : 1.0;
  if (1.0 - z * p > 0.0) {
    const double dp = p * (1.0 - p);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = -z * dp * model_.weights()[i];
  }
  for (std::size_t f = 0; f < origin_.size(); ++f) {
    const auto& s = encoder_.slot(f);
    const double c = lambda_ * metric_.coefficient(f);
    const bool ordinal = encoder_.level_of(s.offset) >= 0;
    if (!ordinal) {
      g[s.offset] += c * sign(e[s.offset] - origin_[f]);
    } else if (metric_.in_continuous_part(f)) {
      const double sg = sign(slice_level(e, s) - origin_[f]);
      for (std::size_t j = 0; j < s.width; ++j) g[s.offset + j] += c * sg * static_cast<double>(j);
    } else {
      g[s.offset + static_cast<std::size_t>(origin_[f])] -= c;
    }
  }
  return g;
}

void project_to_simplex(std::span<double> v) {
  std::vector<double> u(v.begin(), v.end());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0, theta = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cumulative += u[i];
    const double t = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0) theta = t;
  }
  for (auto& x : v) x = std::max(0.0, x - theta);
}

namespace {

class Projector {
 public:
  Projector(const FeatureSchema& schema, const OneHotEncoder& encoder, const Instance& origin,
            std::vector<bool> immutable)
      : schema_(schema), encoder_(encoder), origin_enc_(encoder.encode(origin)), origin_(origin),
        immutable_(std::move(immutable)) {}

  void project(std::span<double> e) const {
    for (std::size_t f = 0; f < schema_.size(); ++f) {
      const auto& s = encoder_.slot(f);
      if (immutable_[f]) {
        for (std::size_t j = 0; j < s.width; ++j) e[s.offset + j] = origin_enc_.bits[s.offset + j];
        continue;
      }
      const auto& spec = schema_.feature(f);
      if (spec.kind == FeatureKind::Continuous)
        e[s.offset] = std::clamp(e[s.offset], spec.min, spec.max);
      else
        project_to_simplex(e.subspan(s.offset, s.width));
    }
  }

  // arg-max per ordinal slice; ties go to the origin level, then the lowest level.
  Instance snap(std::span<const double> e) const {
    Instance x = origin_;
    for (std::size_t f = 0; f < schema_.size(); ++f) {
      if (immutable_[f]) continue;
      const auto& s = encoder_.slot(f);
      const auto& spec = schema_.feature(f);
      if (spec.kind == FeatureKind::Continuous) {
        x[f] = e[s.offset];
        continue;
      }
      const std::size_t home = static_cast<std::size_t>(origin_[f]);
      std::size_t best = home;
      for (std::size_t j = 0; j < s.width; ++j)
        if (e[s.offset + j] > e[s.offset + best]) best = j;
      x[f] = static_cast<double>(best);
    }
    return x;
  }

  const EncodedInstance& origin_encoding() const { return origin_enc_; }

 private:
  const FeatureSchema& schema_;
  const OneHotEncoder& encoder_;
  EncodedInstance origin_enc_;
  const Instance& origin_;
  std::vector<bool> immutable_;
};

// Walk each changed ordinal feature back toward its origin level while the
// prediction stays on target.
Instance tighten(Instance x, const Instance& origin, const FeatureSchema& schema, Label target,
                 CountingModel& model, double& probability) {
  for (std::size_t f = 0; f < schema.size(); ++f) {
    if (schema.feature(f).kind != FeatureKind::Ordinal) continue;
    while (x[f] != origin[f]) {
      const double kept = x[f];
      x[f] += x[f] > origin[f] ? -1.0 : 1.0;
      const double p = model(x);
      if (class_of(p) != target) {
        x[f] = kept;
        break;
      }
      probability = p;
    }
  }
  return x;
}

}  // namespace

CounterfactualSet generate_single_cf(const CFQuery& query, const TrainedModel& model,
                                     const GradientParams& params) {
  const auto& schema = model.schema();
  validate_query(query, schema);
  if (query.k != 1) throw Error(ErrorKind::BadQuery, "the gradient optimiser produces exactly one CF", "k");
  const LogisticModel* logistic = model.as_logistic();
  if (!logistic) throw Error(ErrorKind::BadQuery, "the gradient optimiser needs a logistic model", "optimizer");

  CountingModel counting(model);
  const Label target = query.target_class;
  if (class_of(counting(query.origin)) == target)
    throw Error(ErrorKind::TargetEqualsPrediction,
                "origin is already predicted as class " + std::to_string(target), "target_class");

  const auto& encoder = model.encoder();
  const DistanceMetric metric = metric_for(query, model);
  const Projector projector(schema, encoder, query.origin, immutable_mask(query, schema));
  RelaxedObjective objective(*logistic, encoder, metric, query.origin, target, query.lambda1);

  std::vector<double> e = projector.origin_encoding().bits;
  std::vector<double> m(e.size(), 0.0), v(e.size(), 0.0);
  double beta1_t = 1.0, beta2_t = 1.0;

  struct Best {
    Instance x;
    double probability;
    double score;
  };
  std::optional<Best> best;
  int since_improvement = 0;

  while (counting.calls() + 2 <= query.budget) {
    const auto g = objective.gradient(e);
    counting.charge();  // the gradient costs one model evaluation
    beta1_t *= params.beta1;
    beta2_t *= params.beta2;
    std::vector<double> next = e;
    for (std::size_t i = 0; i < e.size(); ++i) {
      m[i] = params.beta1 * m[i] + (1 - params.beta1) * g[i];
      v[i] = params.beta2 * v[i] + (1 - params.beta2) * g[i] * g[i];
      const double m_hat = m[i] / (1 - beta1_t);
      const double v_hat = v[i] / (1 - beta2_t);
      next[i] -= params.learning_rate * m_hat / (std::sqrt(v_hat) + 1e-12);
    }
    projector.project(next);
    double moved = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) moved = std::max(moved, std::fabs(next[i] - e[i]));
    e = std::move(next);

    Instance snapped = projector.snap(e);
    const double p = counting(snapped);
    if (class_of(p) == target) {
      const double score = hinge_loss(p, target) + query.lambda1 * metric(snapped, query.origin);
      if (!best || score < best->score) {
        best = Best{std::move(snapped), p, score};
        since_improvement = 0;
      } else {
        ++since_improvement;
      }
    }

    const bool stationary = moved < params.stationarity_tol;
    if (best && (stationary || since_improvement >= params.patience)) break;
    if (!best && stationary) {
      if (objective.lambda() < 1e-12) break;  // nothing left to relax: target unreachable
      objective.set_lambda(objective.lambda() * params.lambda_decay);
      std::fill(m.begin(), m.end(), 0.0);
      std::fill(v.begin(), v.end(), 0.0);
      beta1_t = beta2_t = 1.0;
    }
  }

  if (!best)
    throw Error(ErrorKind::NoCounterfactualFound,
                "no valid counterfactual within " + std::to_string(query.budget) + " model evaluations");

  double p = best->probability;
  Instance x = tighten(best->x, query.origin, schema, target, counting, p);
  x = sparsity_pass(x, query.origin, target, counting, p);

  CounterfactualSet out;
  out.query = query;
  out.cfs.push_back(make_counterfactual(std::move(x), p, query.origin, target, metric, schema));
  out.objective_value = hinge_loss(p, target) + query.lambda1 * out.cfs.front().distance_to_origin;
  out.evaluations_used = counting.calls();
  return out;
}

}  // namespace cfx
