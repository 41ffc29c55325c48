#include <benchmark/benchmark.h>

#include "jamgame/adversary_oracle.hpp"
#include "jamgame/age_analytics.hpp"
#include "jamgame/experiment.hpp"
#include "jamgame/monte_carlo.hpp"
#include "jamgame/response_solver.hpp"

namespace {

using namespace jamgame;

JamDistribution busy_law() {
  // Many atoms and pieces so the per-part loops dominate.
  std::vector<Atom> atoms;
  std::vector<Piece> pieces;
  for (int i = 0; i < 32; ++i) {
    atoms.push_back({0.125 * i, 1.0 / 64.0});
    pieces.push_back({0.125 * i + 0.01, 0.125 * i + 0.11, 0.5 / (32 * 0.1)});
  }
  return JamDistribution::create(atoms, pieces);
}

void BM_ClippedMoment(benchmark::State& state) {
  const auto d = busy_law();
  double beta = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(clipped_moment(d, beta, 2));
    beta = beta > 4.0 ? 0.0 : beta + 0.01;
  }
}
BENCHMARK(BM_ClippedMoment);

void BM_BestResponse(benchmark::State& state) {
  const auto d = busy_law();
  BestResponseOptions opts;
  opts.scan_points = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_best_response(d, opts).beta);
}
BENCHMARK(BM_BestResponse)->Arg(0)->Arg(1000);

void BM_Equilibrium(benchmark::State& state) {
  const auto cfg = validate_config(4.0, 1.0);
  for (auto _ : state) {
    const auto sol = equilibrium(cfg);
    benchmark::DoNotOptimize(verify_equilibrium(sol).passed());
  }
}
BENCHMARK(BM_Equilibrium);

void BM_Simulate(benchmark::State& state) {
  const auto sol = equilibrium(validate_config(4.0, 1.0));
  const SimulationOptions opts{static_cast<unsigned>(state.range(1))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate(sol.dist, sol.policy, state.range(0), 1, opts).age_estimate);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulate)->Args({1 << 20, 1})->Args({1 << 20, 0})->Unit(benchmark::kMillisecond);

void BM_Oracle(benchmark::State& state) {
  const auto cfg = validate_config(4.0, 1.0);
  const SearchGrid grid{1.0, 1.0 / static_cast<double>(state.range(0)), GridFamily::SimplexGrid};
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_attacker(cfg, grid).best_age);
}
BENCHMARK(BM_Oracle)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Sweep(benchmark::State& state) {
  const auto cfg = validate_config(4.0, 1.0);
  const auto alphas = parse_alphas("0:0.01:1");
  for (auto _ : state) benchmark::DoNotOptimize(sweep_mixture(cfg, alphas).size());
}
BENCHMARK(BM_Sweep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
