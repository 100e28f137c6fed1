#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace curvcert {

enum class ErrorCode {
  // metric_core
  NotSquare,
  NonFinite,
  NegativeEntry,
  NonzeroDiagonal,
  Asymmetry,
  TriangleViolation,
  DisconnectedGraph,
  InvalidEdge,
  IndexOutOfRange,
  // plane_geometry
  TriangleInequalityViolation,
  LengthsShorterThanSide,
  RatioOutOfRange,
  NotHShort,
  ZeroBaseSegment,
  HypothesisViolated,
  // subembedding
  FanTriangleInfeasible,
  ChainMismatch,
  TooManyOrderings,
  TooLarge,
  // rcat_certify
  HTooLarge,
  BudgetZero,
  // polygon_gluing
  NotConvex,
  PointOutsidePolygon,
  SplitPathUnavailable,
  NotFlatGluing,
  InconsistentDescriptor,
  // experiments
  GeneratorMismatch,
  // cli
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library. `indices` carries the offending
// positions when the error refers to specific points (e.g. the triple of a
// triangle violation).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::vector<std::size_t> indices = {})
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        indices_(std::move(indices)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::vector<std::size_t>& indices() const noexcept { return indices_; }

 private:
  ErrorCode code_;
  std::vector<std::size_t> indices_;
};

}  // namespace curvcert
