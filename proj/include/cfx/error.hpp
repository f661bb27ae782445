#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace cfx {

enum class ErrorKind {
  // tabular
  MissingColumn,
  OutOfRangeValue,
  NonIntegerOrdinal,
  MalformedRow,
  NotOneHot,
  EmptyDataset,
  TooFewMinoritySamples,
  BadFoldCount,
  BadConfig,
  InvalidSchema,
  InvalidInstance,
  Io,
  // models
  WidthMismatch,
  LengthMismatch,
  SingleClassLabels,
  DivergedTraining,
  SchemaMismatch,
  BadModel,
  // counterfactuals
  ModeMismatch,
  NoCounterfactualFound,
  TargetEqualsPrediction,
  BadQuery,
  // importance
  GenerationFailed,
  AllGenerationsFailed,
};

std::string to_string(ErrorKind kind);

// Every recoverable failure in the library is reported through this type.
// `row` and `feature` locate the offending input when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail,
        std::optional<std::string> feature = std::nullopt,
        std::optional<std::size_t> row = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }
  const std::optional<std::string>& feature() const noexcept { return feature_; }
  const std::optional<std::size_t>& row() const noexcept { return row_; }

 private:
  ErrorKind kind_;
  std::string detail_;
  std::optional<std::string> feature_;
  std::optional<std::size_t> row_;
};

}  // namespace cfx
