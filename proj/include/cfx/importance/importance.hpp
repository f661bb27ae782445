#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cfx/cf/counterfactual.hpp"
#include "cfx/cf/evolutionary_search.hpp"
#include "cfx/tabular/dataset.hpp"

namespace cfx {

enum class ImportanceScope { Local, Global };

// Change frequency per raw feature: the share of an instance's counterfactuals
// in which the feature differs from the origin (a level change counts once).
struct ImportanceReport {
  ImportanceScope scope = ImportanceScope::Local;
  std::vector<std::pair<std::string, double>> scores;  // schema order
  int k_per_instance = 10;
  std::size_t instances_covered = 0;
  std::size_t failures = 0;

  double score(const std::string& feature) const;
  // Feature names by descending score, ties by schema order.
  std::vector<std::string> ranking() const;
};

struct ImportanceOptions {
  int k = 10;
  std::vector<std::string> immutable;
  double lambda1 = 0.5;
  double lambda2 = 1.0;
  std::size_t budget = 20000;
  DistanceMode distance_mode = DistanceMode::OrdinalAsCategorical;
  EvolutionParams evolution;
  unsigned threads = 0;  // global pass only; 0 = hardware concurrency
};

// Targets the class opposite to the model's prediction for `origin`.
// Throws Error{GenerationFailed}.
ImportanceReport local_importance(const Instance& origin, const TrainedModel& model,
                                  const ImportanceOptions& options, std::uint64_t seed);

struct GlobalImportance {
  ImportanceReport report;
  std::vector<std::optional<ImportanceReport>> locals;  // one per row, empty on failure
};

// Mean of the successful local reports. Instance i uses a seed derived from
// (seed, i), so the result does not depend on completion order.
// Throws Error{AllGenerationsFailed}.
GlobalImportance global_importance_detailed(const Dataset& data, const TrainedModel& model,
                                            const ImportanceOptions& options, std::uint64_t seed);
ImportanceReport global_importance(const Dataset& data, const TrainedModel& model,
                                   const ImportanceOptions& options, std::uint64_t seed);

void to_json(nlohmann::json& j, const ImportanceReport& r);
// "feature,score" rows sorted by descending score.
void write_importance_csv(std::ostream& out, const ImportanceReport& r);

}  // namespace cfx
