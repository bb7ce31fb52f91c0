#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace trocap {

enum class ErrorKind {
  NotHermitian,
  NotPSD,
  BadExponent,
  DimMismatch,
  NotTracePreserving,
  RankDeficient,
  InvalidSymbol,
  NotTro,
  NotNormalized,
  NotIndependent,
  NotState,
  OptimizerFailed,
  EmptyBlocks,
  HypothesisFailed,
  BadDistribution,
  NotPositiveDefinite,
  OutOfRange,
  ParseError,
};

std::string_view to_string(ErrorKind kind);

/// All recoverable failures in the library carry a kind so callers (the CLI in
/// particular) can map them onto exit codes without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::BadExponent: return "BadExponent";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::NotTracePreserving: return "NotTracePreserving";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::InvalidSymbol: return "InvalidSymbol";
    case ErrorKind::NotTro: return "NotTro";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::NotIndependent: return "NotIndependent";
    case ErrorKind::NotState: return "NotState";
    case ErrorKind::OptimizerFailed: return "OptimizerFailed";
    case ErrorKind::EmptyBlocks: return "EmptyBlocks";
    case ErrorKind::HypothesisFailed: return "HypothesisFailed";
    case ErrorKind::BadDistribution: return "BadDistribution";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace trocap
