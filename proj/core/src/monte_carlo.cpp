#include "jamgame/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "jamgame/error.hpp"
#include "jamgame/parallel.hpp"

namespace jamgame {

StageRandom::StageRandom(std::uint64_t seed, std::uint64_t first_stage)
    : seed_(seed), stage_(first_stage) {
  if (first_stage == 0) throw Error(Errc::InvalidArgument, "stages are numbered from 1");
  reseed();
}

void StageRandom::reseed() {
  const std::uint64_t block = (stage_ - 1) / kRngBlock;
  std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                    static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
  engine_.seed(seq);
  engine_.discard((stage_ - 1) % kRngBlock);
}

double StageRandom::next_uniform() {
  // 53 high bits; std::uniform_real_distribution is not portable bit-for-bit.
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  ++stage_;
  if ((stage_ - 1) % kRngBlock == 0) reseed();
  return u;
}

double sample_jam(const JamDistribution& dist, StageRandom& rng) {
  return dist.quantile(rng.next_uniform());
}

void AgeStats::add(double interval) {
  ++stages;
  total_time += interval;
  const double sq = interval * interval;
  total_area += sq / 2.0;
  sum_cubed += sq * interval;
  sum_fourth += sq * sq;
  min_interval = std::min(min_interval, interval);
  max_interval = std::max(max_interval, interval);
  age_estimate = total_time > 0.0 ? total_area / total_time : 0.0;
}

void AgeStats::merge(const AgeStats& other) {
  stages += other.stages;
  total_time += other.total_time;
  total_area += other.total_area;
  sum_cubed += other.sum_cubed;
  sum_fourth += other.sum_fourth;
  min_interval = std::min(min_interval, other.min_interval);
  max_interval = std::max(max_interval, other.max_interval);
  age_estimate = total_time > 0.0 ? total_area / total_time : 0.0;
}

double AgeStats::standard_error() const {
  if (stages < 2 || !(total_time > 0.0)) return 0.0;
  const double n = static_cast<double>(stages);
  const double r = age_estimate;
  const double m1 = total_time / n;
  const double m2 = 2.0 * total_area / n;
  // Var(L^2/2 - r L) = E[L^4]/4 - r E[L^3] + r^2 E[L^2], since E[L^2/2 - r L] = 0.
  const double var = std::max(0.0, sum_fourth / n / 4.0 - r * sum_cubed / n + r * r * m2);
  return std::sqrt(var / n) / m1;
}

AgeStats simulate(const JamDistribution& dist, const SamplingPolicy& policy, std::uint64_t stages,
                  std::uint64_t seed, const SimulationOptions& options) {
  if (stages == 0) throw Error(Errc::InvalidArgument, "simulation needs at least one stage");
  const std::uint64_t blocks = (stages + kRngBlock - 1) / kRngBlock;
  std::vector<AgeStats> partial(blocks);
  parallel_for(blocks, resolve_workers(options.threads), [&](std::size_t b) {
    const std::uint64_t first = b * kRngBlock + 1;
    const std::uint64_t last = std::min<std::uint64_t>(first + kRngBlock - 1, stages);
    StageRandom rng(seed, first);
    AgeStats& acc = partial[b];
    for (std::uint64_t n = first; n <= last; ++n) {
      acc.add(policy.interval(sample_jam(dist, rng)));
    }
  });
  AgeStats total;
  for (const auto& p : partial) total.merge(p);
  return total;
}

std::vector<StagePath> trace(const JamDistribution& dist, const SamplingPolicy& policy,
                             std::uint64_t stages, std::uint64_t seed, std::size_t cap) {
  if (stages == 0) throw Error(Errc::InvalidArgument, "trace needs at least one stage");
  if (stages > cap) {
    throw Error(Errc::TraceCapExceeded,
                std::to_string(stages) + " stages exceeds the trace cap of " + std::to_string(cap));
  }
  std::vector<StagePath> out;
  out.reserve(stages);
  StageRandom rng(seed);
  double epoch = 0.0;
  for (std::uint64_t n = 1; n <= stages; ++n) {
    const double jam = sample_jam(dist, rng);
    StagePath s;
    s.jam = jam;
    s.delay = policy.delay(jam);
    s.interval = policy.interval(jam);
    epoch += s.interval;
    s.sample_epoch = epoch;
    out.push_back(s);
  }
  return out;
}

}  // namespace jamgame
