#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "jamgame/game_model.hpp"

namespace jamgame {

/// One alpha of the mixture sweep between the deterministic jammer delta(a_avg)
/// (alpha = 0) and the equilibrium law (alpha = 1).
struct MixtureSweepRow {
  double alpha = 0.0;
  double age_equilibrium_policy = 0.0;  // under the best-response threshold
  double age_zero_wait = 0.0;
  double beta_br = 0.0;
  std::optional<double> age_simulated;
};

struct SweepSimulation {
  std::uint64_t stages = 0;
  std::uint64_t seed = 0;
};

/// alpha * f* + (1 - alpha) * delta(a_avg). Both components have mean a_avg.
JamDistribution mixture_distribution(const GameConfig& cfg, double alpha);

/// Rows come back sorted by alpha. Each row is independent and may run on its
/// own worker; simulated ages use the same seed for every row.
std::vector<MixtureSweepRow> sweep_mixture(const GameConfig& cfg, std::span<const double> alphas,
                                           std::optional<SweepSimulation> simulation = std::nullopt,
                                           unsigned threads = 0);

/// "start:step:stop" (stop included within 1e-9) or a comma-separated list.
std::vector<double> parse_alphas(std::string_view text);

}  // namespace jamgame
