#include "piggybank/error.hpp"

namespace piggybank {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonPrimeFactor: return "NonPrimeFactor";
    case ErrorCode::ExponentNotCoprime: return "ExponentNotCoprime";
    case ErrorCode::InputOutOfRange: return "InputOutOfRange";
    case ErrorCode::SecretOutOfRange: return "SecretOutOfRange";
    case ErrorCode::HashOutOfRange: return "HashOutOfRange";
    case ErrorCode::RecoveryMismatch: return "RecoveryMismatch";
    case ErrorCode::InsufficientPhotons: return "InsufficientPhotons";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::EmptyBatch: return "EmptyBatch";
    case ErrorCode::WrongStage: return "WrongStage";
    case ErrorCode::SiphonExceedsBatch: return "SiphonExceedsBatch";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

}  // namespace piggybank
