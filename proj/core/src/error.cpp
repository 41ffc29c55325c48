#include "jamgame/error.hpp"

namespace jamgame {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NonFinite: return "NonFinite";
    case Errc::InfeasibleMean: return "InfeasibleMean";
    case Errc::DegenerateBudget: return "DegenerateBudget";
    case Errc::InvalidDistribution: return "InvalidDistribution";
    case Errc::InvalidPolicy: return "InvalidPolicy";
    case Errc::WeightSum: return "WeightSum";
    case Errc::ProbabilityRange: return "ProbabilityRange";
    case Errc::MomentOrder: return "MomentOrder";
    case Errc::ZeroStageLength: return "ZeroStageLength";
    case Errc::ZeroDenominator: return "ZeroDenominator";
    case Errc::NoBracket: return "NoBracket";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::TraceCapExceeded: return "TraceCapExceeded";
    case Errc::InvalidGrid: return "InvalidGrid";
    case Errc::Parse: return "Parse";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace jamgame
