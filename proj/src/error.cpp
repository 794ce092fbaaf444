#include "habitpath/error.hpp"

namespace habitpath {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonPositiveWealth: return "NON_POSITIVE_WEALTH";
    case ErrorCode::kBadHorizon: return "BAD_HORIZON";
    case ErrorCode::kParamOutOfRange: return "PARAM_OUT_OF_RANGE";
    case ErrorCode::kIrrelevantParam: return "IRRELEVANT_PARAM";
    case ErrorCode::kMissingParam: return "MISSING_PARAM";
    case ErrorCode::kBadConfig: return "BAD_CONFIG";
    case ErrorCode::kDomain: return "DOMAIN";
    case ErrorCode::kNoFeasibleGridPoint: return "NO_FEASIBLE_GRID_POINT";
  }
  return "UNKNOWN";
}

namespace {

std::string format_message(ErrorCode code, const std::string& message,
                           const std::string& field,
                           std::optional<int> period) {
  std::string out{to_string(code)};
  out += ": ";
  out += message;
  if (!field.empty()) out += " [field '" + field + "']";
  if (period) out += " [period " + std::to_string(*period) + "]";
  return out;
}

}  // namespace

Error::Error(ErrorCode code, std::string message, std::string field,
             std::optional<int> period)
    : std::runtime_error(format_message(code, message, field, period)),
      code_(code),
      field_(std::move(field)),
      period_(period) {}

}  // namespace habitpath
