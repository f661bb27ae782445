#include "cfx/cf/evolutionary_search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "cfx/cf/objective.hpp"
#include "cfx/cf/sparsity.hpp"
#include "cfx/error.hpp"

namespace cfx {

namespace {

struct Candidate {
  std::vector<Instance> members;
  std::vector<double> probabilities;
  double fitness = 0.0;
};

class Search {
 public:
  Search(const CFQuery& q, const TrainedModel& model, const EvolutionParams& params)
      : q_(q),
        schema_(model.schema()),
        params_(params),
        metric_(metric_for(q, model)),
        counting_(model),
        rng_(q.seed) {
    const auto mask = immutable_mask(q, schema_);
    for (std::size_t f = 0; f < schema_.size(); ++f)
      if (!mask[f]) mutable_.push_back(f);
  }

  CountingModel& counting() { return counting_; }
  const DistanceMetric& metric() const { return metric_; }

  Candidate run() {
    const std::size_t k = static_cast<std::size_t>(q_.k);
    const std::size_t pop_size = std::max<std::size_t>(2, params_.population);

    std::vector<Candidate> pop;
    while (pop.size() < pop_size && can_afford(k)) pop.push_back(evaluate(random_candidate()));
    if (pop.empty())
      throw Error(ErrorKind::NoCounterfactualFound, "budget too small to evaluate one candidate set");
    sort(pop);

    double best = pop.front().fitness;
    int stagnant = 0;
    while (stagnant < params_.stagnation_limit && can_afford(k)) {
      std::vector<Candidate> next(pop.begin(), pop.begin() + static_cast<std::ptrdiff_t>(
                                                                 std::min(params_.elites, pop.size())));
      while (next.size() < pop_size && can_afford(k)) next.push_back(breed(pop));
      pop = std::move(next);
      sort(pop);
      if (pop.front().fitness < best - 1e-12) {
        best = pop.front().fitness;
        stagnant = 0;
      } else {
        ++stagnant;
      }
    }
    return pop.front();
  }

 private:
  bool can_afford(std::size_t evals) const { return counting_.calls() + evals <= q_.budget; }

  static void sort(std::vector<Candidate>& pop) {
    std::stable_sort(pop.begin(), pop.end(),
                     [](const Candidate& a, const Candidate& b) { return a.fitness < b.fitness; });
  }

  Candidate random_candidate() {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Candidate c;
    c.members.assign(static_cast<std::size_t>(q_.k), q_.origin);
    for (auto& x : c.members) {
      for (std::size_t f : mutable_) {
        const auto& spec = schema_.feature(f);
        if (spec.kind == FeatureKind::Ordinal)
          x[f] = std::uniform_int_distribution<int>(0, spec.max_level)(rng_);
        else
          x[f] = spec.min + (spec.max - spec.min) * unit(rng_);
      }
    }
    return c;
  }

  Candidate evaluate(Candidate c, const Candidate* parent = nullptr) {
    c.probabilities.resize(c.members.size());
    for (std::size_t i = 0; i < c.members.size(); ++i) {
      if (parent && parent->members[i] == c.members[i])
        c.probabilities[i] = parent->probabilities[i];
      else
        c.probabilities[i] = counting_(c.members[i]);
    }
    c.fitness = dice_objective(c.members, c.probabilities, q_.origin, q_.target_class, q_.lambda1,
                               q_.lambda2, metric_);
    return c;
  }

  const Candidate& select(const std::vector<Candidate>& pop) {
    std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
    std::size_t winner = pick(rng_);
    for (std::size_t t = 1; t < params_.tournament; ++t) winner = std::min(winner, pick(rng_));
    return pop[winner];  // pop is sorted, so the lowest index is the fittest
  }

  void mutate(Instance& x) {
    if (mutable_.empty()) return;
    const std::size_t f = mutable_[std::uniform_int_distribution<std::size_t>(0, mutable_.size() - 1)(rng_)];
    const auto& spec = schema_.feature(f);
    if (spec.kind == FeatureKind::Ordinal) {
      double step = std::bernoulli_distribution(0.5)(rng_) ? 1.0 : -1.0;
      if (x[f] + step < 0 || x[f] + step > spec.max_level) step = -step;
      x[f] = std::clamp(x[f] + step, 0.0, static_cast<double>(spec.max_level));
    } else {
      std::normal_distribution<double> gauss(0.0, params_.continuous_step * (spec.max - spec.min));
      x[f] = std::clamp(x[f] + gauss(rng_), spec.min, spec.max);
    }
  }

  Candidate breed(const std::vector<Candidate>& pop) {
    const Candidate& a = select(pop);
    const Candidate& b = select(pop);
    Candidate child;
    child.members = a.members;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (unit(rng_) < params_.crossover_rate) {
      for (std::size_t i = 0; i < child.members.size(); ++i)
        for (std::size_t f : mutable_)
          if (unit(rng_) < 0.5) child.members[i][f] = b.members[i][f];
    }
    bool mutated = false;
    for (auto& x : child.members) {
      if (unit(rng_) < params_.mutation_rate) {
        mutate(x);
        mutated = true;
      }
    }
    if (!mutated) {
      const std::size_t i = std::uniform_int_distribution<std::size_t>(0, child.members.size() - 1)(rng_);
      mutate(child.members[i]);
    }
    return evaluate(std::move(child), &a);
  }

  const CFQuery& q_;
  const FeatureSchema& schema_;
  EvolutionParams params_;
  DistanceMetric metric_;
  CountingModel counting_;
  std::mt19937_64 rng_;
  std::vector<std::size_t> mutable_;
};

}  // namespace

CounterfactualSet generate_diverse_cfs(const CFQuery& query, const TrainedModel& model,
                                       const EvolutionParams& params) {
  const auto& schema = model.schema();
  validate_query(query, schema);
  Search search(query, model, params);
  const Label target = query.target_class;
  if (class_of(search.counting()(query.origin)) == target)
    throw Error(ErrorKind::TargetEqualsPrediction,
                "origin is already predicted as class " + std::to_string(target), "target_class");

  const Candidate best = search.run();

  CounterfactualSet out;
  out.query = query;
  std::vector<Instance> kept;
  std::vector<double> kept_probs;
  for (std::size_t i = 0; i < best.members.size(); ++i) {
    if (class_of(best.probabilities[i]) != target) continue;
    double p = best.probabilities[i];
    Instance reduced = sparsity_pass(best.members[i], query.origin, target, search.counting(), p);
    if (class_of(p) != target) continue;
    kept.push_back(reduced);
    kept_probs.push_back(p);
    out.cfs.push_back(make_counterfactual(std::move(reduced), p, query.origin, target, search.metric(), schema));
  }
  out.evaluations_used = search.counting().calls();
  if (out.cfs.empty())
    throw Error(ErrorKind::NoCounterfactualFound,
                "no valid counterfactual within " + std::to_string(query.budget) + " model evaluations");
  out.partial = out.cfs.size() < static_cast<std::size_t>(query.k);
  out.objective_value = dice_objective(kept, kept_probs, query.origin, target, query.lambda1, query.lambda2,
                                       search.metric());
  return out;
}

}  // namespace cfx
