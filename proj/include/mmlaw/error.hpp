#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mmlaw {

enum class ErrorKind {
  IncompleteMatrix,
  DuplicateId,
  InvalidCell,
  InvalidId,
  UnknownModel,
  Parse,
  Io,
  EmptyEnsemble,
  DuplicateMember,
  EmptyPointSet,
  InvalidPoint,
  InvalidKMax,
  PoolTooLarge,
  InsufficientPoints,
  DegenerateAbscissae,
  InvalidBudget,
  InvalidFitConfig,
  InfeasibleStart,
  InsufficientPool,
  InvalidSynthConfig,
  InvalidArgument,
};

/// Stable machine-readable name, e.g. "incomplete matrix".
constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::IncompleteMatrix: return "incomplete matrix";
    case ErrorKind::DuplicateId: return "duplicate id";
    case ErrorKind::InvalidCell: return "invalid cell";
    case ErrorKind::InvalidId: return "invalid id";
    case ErrorKind::UnknownModel: return "unknown model";
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::Io: return "io error";
    case ErrorKind::EmptyEnsemble: return "empty ensemble";
    case ErrorKind::DuplicateMember: return "duplicate member";
    case ErrorKind::EmptyPointSet: return "empty point set";
    case ErrorKind::InvalidPoint: return "invalid point";
    case ErrorKind::InvalidKMax: return "invalid k_max";
    case ErrorKind::PoolTooLarge: return "pool exceeds brute-force limit";
    case ErrorKind::InsufficientPoints: return "insufficient points";
    case ErrorKind::DegenerateAbscissae: return "degenerate abscissae";
    case ErrorKind::InvalidBudget: return "invalid budget";
    case ErrorKind::InvalidFitConfig: return "invalid fit config";
    case ErrorKind::InfeasibleStart: return "infeasible start";
    case ErrorKind::InsufficientPool: return "insufficient pool";
    case ErrorKind::InvalidSynthConfig: return "invalid synth config";
    case ErrorKind::InvalidArgument: return "invalid argument";
  }
  return "unknown error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail),
        kind_(kind),
        detail_(detail) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view code() const noexcept { return to_string(kind_); }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace mmlaw
