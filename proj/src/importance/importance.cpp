#include "cfx/importance/importance.hpp"

#include <algorithm>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>

#include "cfx/cf/generate.hpp"
#include "cfx/error.hpp"
#include "cfx/parallel.hpp"
#include "cfx/seed.hpp"

namespace cfx {

using nlohmann::json;

double ImportanceReport::score(const std::string& feature) const {
  for (const auto& [name, s] : scores)
    if (name == feature) return s;
  throw Error(ErrorKind::BadConfig, "feature not in report", feature);
}

std::vector<std::string> ImportanceReport::ranking() const {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a].second > scores[b].second; });
  std::vector<std::string> out;
  out.reserve(order.size());
  for (auto i : order) out.push_back(scores[i].first);
  return out;
}

ImportanceReport local_importance(const Instance& origin, const TrainedModel& model,
                                  const ImportanceOptions& options, std::uint64_t seed) {
  const auto& schema = model.schema();
  CFQuery q;
  q.origin = origin;
  q.target_class = 1 - model.predict_class(origin);
  q.k = options.k;
  q.immutable = options.immutable;
  q.lambda1 = options.lambda1;
  q.lambda2 = options.lambda2;
  q.optimizer = Optimizer::Evolutionary;
  q.seed = seed;
  q.budget = options.budget;
  q.distance_mode = options.distance_mode;

  CounterfactualSet set;
  try {
    set = generate_diverse_cfs(q, model, options.evolution);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NoCounterfactualFound)
      throw Error(ErrorKind::GenerationFailed, e.detail());
    throw;
  }

  ImportanceReport r;
  r.scope = ImportanceScope::Local;
  r.k_per_instance = options.k;
  r.instances_covered = 1;
  const double n = static_cast<double>(set.cfs.size());
  for (std::size_t f = 0; f < schema.size(); ++f) {
    std::size_t changed = 0;
    for (const auto& cf : set.cfs) changed += (cf.values[f] != origin[f]);
    r.scores.emplace_back(schema.feature(f).name, static_cast<double>(changed) / n);
  }
  return r;
}

GlobalImportance global_importance_detailed(const Dataset& data, const TrainedModel& model,
                                            const ImportanceOptions& options, std::uint64_t seed) {
  GlobalImportance out;
  out.locals.resize(data.size());
  parallel_for(
      data.size(),
      [&](std::size_t i) {
        try {
          out.locals[i] = local_importance(data.rows[i], model, options, derive_seed(seed, i));
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::GenerationFailed) throw;
        }
      },
      options.threads);

  const auto& schema = model.schema();
  ImportanceReport& r = out.report;
  r.scope = ImportanceScope::Global;
  r.k_per_instance = options.k;
  std::vector<double> sums(schema.size(), 0.0);
  for (const auto& local : out.locals) {
    if (!local) {
      ++r.failures;
      continue;
    }
    ++r.instances_covered;
    for (std::size_t f = 0; f < schema.size(); ++f) sums[f] += local->scores[f].second;
  }
  if (r.instances_covered == 0)
    throw Error(ErrorKind::AllGenerationsFailed,
                "no counterfactuals found for any of " + std::to_string(data.size()) + " instances");
  for (std::size_t f = 0; f < schema.size(); ++f)
    r.scores.emplace_back(schema.feature(f).name, sums[f] / static_cast<double>(r.instances_covered));
  return out;
}

ImportanceReport global_importance(const Dataset& data, const TrainedModel& model,
                                   const ImportanceOptions& options, std::uint64_t seed) {
  return global_importance_detailed(data, model, options, seed).report;
}

void to_json(json& j, const ImportanceReport& r) {
  json scores = json::object();
  for (const auto& [name, s] : r.scores) scores[name] = s;
  j = json{{"scope", r.scope == ImportanceScope::Local ? "local" : "global"},
           {"scores", std::move(scores)},
           {"ranking", r.ranking()},
           {"k_per_instance", r.k_per_instance},
           {"instances_covered", r.instances_covered},
           {"failures", r.failures}};
}

void write_importance_csv(std::ostream& out, const ImportanceReport& r) {
  out << "feature,score\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& name : r.ranking()) out << name << ',' << r.score(name) << '\n';
}

}  // namespace cfx
