#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace afem {

enum class ErrorCode {
  NonPositiveArea,
  HangingNode,
  DanglingBoundaryTag,
  InvalidMark,
  NotPositiveDefinite,
  UnknownBenchmark,
  SingularLocalFactor,
  SingularMatrix,
  MeshMismatch,
  BadTheta,
  NoExactSolution,
  InsufficientLevels,
  ConfigError,
  IoError,
  ParseError,
  InvalidIndex,
  EquivalenceMismatch,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonPositiveArea: return "NonPositiveArea";
    case ErrorCode::HangingNode: return "HangingNode";
    case ErrorCode::DanglingBoundaryTag: return "DanglingBoundaryTag";
    case ErrorCode::InvalidMark: return "InvalidMark";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::UnknownBenchmark: return "UnknownBenchmark";
    case ErrorCode::SingularLocalFactor: return "SingularLocalFactor";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::MeshMismatch: return "MeshMismatch";
    case ErrorCode::BadTheta: return "BadTheta";
    case ErrorCode::NoExactSolution: return "NoExactSolution";
    case ErrorCode::InsufficientLevels: return "InsufficientLevels";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidIndex: return "InvalidIndex";
    case ErrorCode::EquivalenceMismatch: return "EquivalenceMismatch";
  }
  return "Unknown";
}

}  // namespace afem
