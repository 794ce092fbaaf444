#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace habitpath {

enum class ErrorCode {
  kNonPositiveWealth,
  kBadHorizon,
  kParamOutOfRange,
  kIrrelevantParam,
  kMissingParam,
  kBadConfig,
  kDomain,
  kNoFeasibleGridPoint,
};

std::string_view to_string(ErrorCode code);

// Structured failure raised by validation, evaluation and the oracles.
// `field` names the offending configuration key; `period` the offending year.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::string field = {},
        std::optional<int> period = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  const std::string& field() const noexcept { return field_; }
  std::optional<int> period() const noexcept { return period_; }

 private:
  ErrorCode code_;
  std::string field_;
  std::optional<int> period_;
};

}  // namespace habitpath
