#include "spx/error.hpp"

namespace spx {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::NonCanonicalLabel: return "NonCanonicalLabel";
    case ErrorCode::EmptyPixelSet: return "EmptyPixelSet";
    case ErrorCode::PartAbsent: return "PartAbsent";
    case ErrorCode::NoBackgroundPixels: return "NoBackgroundPixels";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ProtocolError: return "ProtocolError";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::DetectorCrash: return "DetectorCrash";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::DegenerateCoalition: return "DegenerateCoalition";
    case ErrorCode::BudgetTooSmall: return "BudgetTooSmall";
    case ErrorCode::Underdetermined: return "Underdetermined";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::TooManyParts: return "TooManyParts";
    case ErrorCode::PartMismatch: return "PartMismatch";
    case ErrorCode::MissingErrors: return "MissingErrors";
    case ErrorCode::MixedAbstraction: return "MixedAbstraction";
    case ErrorCode::UnsupportedLevel: return "UnsupportedLevel";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

int exit_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::NonCanonicalLabel:
    case ErrorCode::UnsupportedLevel:
      return 1;
    case ErrorCode::ProtocolError:
    case ErrorCode::Timeout:
    case ErrorCode::DetectorCrash:
    case ErrorCode::VersionMismatch:
      return 3;
    case ErrorCode::IoError:
      return 4;
    default:
      return 2;
  }
}

}  // namespace spx
