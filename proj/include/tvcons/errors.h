#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tvcons {

enum class ErrorKind {
  kInvalidArgument,
  kDimensionMismatch,
  kNotUnitCircle,
  kNotReachable,
  kNotSemiSimple,
  kNormalizationFailure,
  kAreDiverged,
  kIllConditioned,
  kGainBoundViolated,
  kHinfBoundViolated,
  kNotSchur,
  kAssumptionLViolated,
  kDegenerateDenominator,
  kModeMismatch,
  kFullRank,
  kConfig,
};

std::string_view ToString(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it to an exit code without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(ToString(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace tvcons
