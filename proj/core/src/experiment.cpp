#include "jamgame/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "jamgame/age_analytics.hpp"
#include "jamgame/error.hpp"
#include "jamgame/monte_carlo.hpp"
#include "jamgame/parallel.hpp"
#include "jamgame/response_solver.hpp"

namespace jamgame {

namespace {

double parse_number(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw Error(Errc::Parse, "not a number: '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

JamDistribution mixture_distribution(const GameConfig& cfg, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(Errc::WeightSum, "alpha must lie in [0, 1], got " + std::to_string(alpha));
  }
  const MixtureComponent parts[] = {
      {equilibrium_distribution(cfg), alpha},
      {JamDistribution::point_mass(cfg.a_avg), 1.0 - alpha},
  };
  return mix(parts);
}

std::vector<MixtureSweepRow> sweep_mixture(const GameConfig& cfg, std::span<const double> alphas,
                                           std::optional<SweepSimulation> simulation,
                                           unsigned threads) {
  const GameConfig checked = validate_config(cfg.a_max, cfg.a_avg);
  std::vector<double> sorted(alphas.begin(), alphas.end());
  std::sort(sorted.begin(), sorted.end());
  for (double a : sorted) {
    if (!(a >= 0.0 && a <= 1.0)) {
      throw Error(Errc::WeightSum, "alpha must lie in [0, 1], got " + std::to_string(a));
    }
  }

  std::vector<MixtureSweepRow> rows(sorted.size());
  const unsigned workers = resolve_workers(threads);
  // Rows run in parallel; each simulation then stays on its row's worker.
  SimulationOptions sim_options;
  sim_options.threads = 1;
  parallel_for(rows.size(), workers, [&](std::size_t i) {
    const auto dist = mixture_distribution(checked, sorted[i]);
    const auto br = best_response(dist);
    MixtureSweepRow row;
    row.alpha = sorted[i];
    row.beta_br = br.as_threshold()->beta;
    row.age_equilibrium_policy = average_age(dist, br).value;
    row.age_zero_wait = average_age(dist, SamplingPolicy::zero_wait()).value;
    if (simulation) {
      row.age_simulated = simulate(dist, br, simulation->stages, simulation->seed, sim_options).age_estimate;
    }
    rows[i] = row;
  });
  return rows;
}

std::vector<double> parse_alphas(std::string_view text) {
  std::vector<double> out;
  if (text.find(':') != std::string_view::npos) {
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string_view::npos || text.find(':', c2 + 1) != std::string_view::npos) {
      throw Error(Errc::Parse, "range must be start:step:stop");
    }
    const double start = parse_number(text.substr(0, c1));
    const double step = parse_number(text.substr(c1 + 1, c2 - c1 - 1));
    const double stop = parse_number(text.substr(c2 + 1));
    if (!(step > 0.0) || stop < start) throw Error(Errc::Parse, "range needs step > 0 and stop >= start");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (std::size_t k = 0; k < count; ++k) {
      double v = start + static_cast<double>(k) * step;
      if (std::abs(v - stop) <= 1e-9) v = stop;
      out.push_back(v);
    }
    return out;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto end = comma == std::string_view::npos ? text.size() : comma;
    out.push_back(parse_number(text.substr(pos, end - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace jamgame
