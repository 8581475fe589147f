#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace atf {

enum class ErrorCode {
  Parse,
  DivisionByZero,
  ZeroVector,
  BadParams,
  NotCoprime,
  IndexOutOfRange,
  NotACorner,
  NotIsolated,
  NotDelzant,
  EpsilonTooLarge,
  LeavesRegion,
  NodeOrderViolated,
  HitsNode,
  CutCollision,
  CornerMerge,
  EigenlineGrazesBoundary,
  UnsupportedRegion,
  Unclearable,
  NotIntegrallyTransversal,
  NotAGermOfEq18,
  OutOfRegion,
  NonDelzantBareVertex,
  NoCornerAtEdge,
  BadEdge,
  InsufficientData,
  WalkAborted,
  EmptyViewport,
  InvalidDiagram,
};

inline std::string_view to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::NotCoprime: return "NotCoprime";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NotACorner: return "NotACorner";
    case ErrorCode::NotIsolated: return "NotIsolated";
    case ErrorCode::NotDelzant: return "NotDelzant";
    case ErrorCode::EpsilonTooLarge: return "EpsilonTooLarge";
    case ErrorCode::LeavesRegion: return "LeavesRegion";
    case ErrorCode::NodeOrderViolated: return "NodeOrderViolated";
    case ErrorCode::HitsNode: return "HitsNode";
    case ErrorCode::CutCollision: return "CutCollision";
    case ErrorCode::CornerMerge: return "CornerMerge";
    case ErrorCode::EigenlineGrazesBoundary: return "EigenlineGrazesBoundary";
    case ErrorCode::UnsupportedRegion: return "UnsupportedRegion";
    case ErrorCode::Unclearable: return "Unclearable";
    case ErrorCode::NotIntegrallyTransversal: return "NotIntegrallyTransversal";
    case ErrorCode::NotAGermOfEq18: return "NotAGermOfEq18";
    case ErrorCode::OutOfRegion: return "OutOfRegion";
    case ErrorCode::NonDelzantBareVertex: return "NonDelzantBareVertex";
    case ErrorCode::NoCornerAtEdge: return "NoCornerAtEdge";
    case ErrorCode::BadEdge: return "BadEdge";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::WalkAborted: return "WalkAborted";
    case ErrorCode::EmptyViewport: return "EmptyViewport";
    case ErrorCode::InvalidDiagram: return "InvalidDiagram";
  }
  return "Unknown";
}

/// All library failures are reported through this exception; `code()` is stable and
/// machine-readable, `what()` is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace atf
