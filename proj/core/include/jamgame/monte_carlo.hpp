#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "jamgame/game_model.hpp"

namespace jamgame {

/// Stages per generator block. Stage n draws from block (n - 1) / kRngBlock,
/// whose engine is seeded from (seed, block), so every draw is a function of
/// (seed, n) alone.
inline constexpr std::uint64_t kRngBlock = 4096;
inline constexpr std::size_t kDefaultTraceCap = 100000;

/// Uniform [0, 1) stream positioned at a given stage.
class StageRandom {
 public:
  StageRandom(std::uint64_t seed, std::uint64_t first_stage = 1);

  /// Uniform draw for the current stage; advances to the next stage.
  double next_uniform();
  std::uint64_t stage() const { return stage_; }

 private:
  void reseed();

  std::uint64_t seed_;
  std::uint64_t stage_;
  std::mt19937_64 engine_;
};

/// Inverse-CDF draw of one jamming time.
double sample_jam(const JamDistribution& dist, StageRandom& rng);

/// Exact sawtooth accumulator: each stage of length L adds L to the elapsed
/// time and L^2 / 2 to the age area.
struct AgeStats {
  std::uint64_t stages = 0;
  double total_time = 0.0;
  double total_area = 0.0;
  double age_estimate = 0.0;
  double min_interval = std::numeric_limits<double>::infinity();
  double max_interval = 0.0;
  double sum_cubed = 0.0;   // sum of L^3
  double sum_fourth = 0.0;  // sum of L^4

  void add(double interval);
  /// Sums and extrema; merging in a fixed order is bit-reproducible.
  void merge(const AgeStats& other);
  /// Delta-method standard error of the ratio estimator total_area / total_time.
  double standard_error() const;
};

struct SimulationOptions {
  unsigned threads = 0;  // see resolve_workers()
};

/// Simulates `stages` stages (>= 1). The result depends only on
/// (dist, policy, stages, seed), never on the worker count.
AgeStats simulate(const JamDistribution& dist, const SamplingPolicy& policy, std::uint64_t stages,
                  std::uint64_t seed, const SimulationOptions& options = {});

/// Per-stage records drawn from the same stream as simulate().
std::vector<StagePath> trace(const JamDistribution& dist, const SamplingPolicy& policy,
                             std::uint64_t stages, std::uint64_t seed,
                             std::size_t cap = kDefaultTraceCap);

}  // namespace jamgame
