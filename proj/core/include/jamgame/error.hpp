#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace jamgame {

enum class Errc {
  NonFinite,
  InfeasibleMean,
  DegenerateBudget,
  InvalidDistribution,
  InvalidPolicy,
  WeightSum,
  ProbabilityRange,
  MomentOrder,
  ZeroStageLength,
  ZeroDenominator,
  NoBracket,
  InvalidArgument,
  TraceCapExceeded,
  InvalidGrid,
  Parse,
  Io,
};

std::string_view to_string(Errc code) noexcept;

/// Validation and modeling failures. Everything except NoBracket is a caller
/// error; NoBracket means an internal invariant was broken.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }
  bool is_internal() const noexcept { return code_ == Errc::NoBracket; }

 private:
  Errc code_;
};

}  // namespace jamgame
