#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spx {

enum class ErrorCode {
  // configuration
  ConfigError,
  // segmentation
  DimensionMismatch,
  UnknownLabel,
  NonCanonicalLabel,
  // masking
  EmptyPixelSet,
  PartAbsent,
  NoBackgroundPixels,
  LengthMismatch,
  // detector
  ProtocolError,
  Timeout,
  DetectorCrash,
  VersionMismatch,
  // attribution
  DegenerateCoalition,
  BudgetTooSmall,
  Underdetermined,
  SingularSystem,
  TooManyParts,
  // reporting
  PartMismatch,
  MissingErrors,
  MixedAbstraction,
  UnsupportedLevel,
  EmptyInput,
  // files
  IoError,
};

/// Stable identifier emitted in machine-readable error output.
std::string_view error_code_name(ErrorCode code) noexcept;

/// Process exit status for an error category: 1 config, 2 solver or
/// precondition, 3 detector or protocol, 4 I/O.
int exit_status(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace spx
