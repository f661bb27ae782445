#include "cfx/error.hpp"

namespace cfx {

std::string to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MissingColumn: return "MissingColumn";
    case ErrorKind::OutOfRangeValue: return "OutOfRangeValue";
    case ErrorKind::NonIntegerOrdinal: return "NonIntegerOrdinal";
    case ErrorKind::MalformedRow: return "MalformedRow";
    case ErrorKind::NotOneHot: return "NotOneHot";
    case ErrorKind::EmptyDataset: return "EmptyDataset";
    case ErrorKind::TooFewMinoritySamples: return "TooFewMinoritySamples";
    case ErrorKind::BadFoldCount: return "BadFoldCount";
    case ErrorKind::BadConfig: return "BadConfig";
    case ErrorKind::InvalidSchema: return "InvalidSchema";
    case ErrorKind::InvalidInstance: return "InvalidInstance";
    case ErrorKind::Io: return "Io";
    case ErrorKind::WidthMismatch: return "WidthMismatch";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::SingleClassLabels: return "SingleClassLabels";
    case ErrorKind::DivergedTraining: return "DivergedTraining";
    case ErrorKind::SchemaMismatch: return "SchemaMismatch";
    case ErrorKind::BadModel: return "BadModel";
    case ErrorKind::ModeMismatch: return "ModeMismatch";
    case ErrorKind::NoCounterfactualFound: return "NoCounterfactualFound";
    case ErrorKind::TargetEqualsPrediction: return "TargetEqualsPrediction";
    case ErrorKind::BadQuery: return "BadQuery";
    case ErrorKind::GenerationFailed: return "GenerationFailed";
    case ErrorKind::AllGenerationsFailed: return "AllGenerationsFailed";
  }
  return "Unknown";
}

namespace {

std::string compose(ErrorKind kind, const std::string& detail,
                    const std::optional<std::string>& feature,
                    const std::optional<std::size_t>& row) {
  std::string msg = to_string(kind);
  if (row) msg += " at row " + std::to_string(*row);
  if (feature) msg += (row ? ", " : " at ") + std::string("feature '") + *feature + "'";
  if (!detail.empty()) msg += ": " + detail;
  return msg;
}

}  // namespace

Error::Error(ErrorKind kind, const std::string& detail,
             std::optional<std::string> feature, std::optional<std::size_t> row)
    : std::runtime_error(compose(kind, detail, feature, row)),
      kind_(kind),
      detail_(detail),
      feature_(std::move(feature)),
      row_(row) {}

}  // namespace cfx
