#pragma once

// Reference computations that share no code path with the library: composite
// Simpson quadrature for moments and a dense scan for the best-response root.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "jamgame/game_model.hpp"

namespace jamgame::testing {

// Integrates h(a) dF(a) with Simpson's rule on every density piece, split at
// `kinks` so each panel is smooth.
inline double expect(const JamDistribution& dist, const std::function<double(double)>& h,
                     const std::vector<double>& kinks = {}, int panels = 2000) {
  double total = 0.0;
  for (const auto& atom : dist.atoms()) total += atom.mass * h(atom.location);
  for (const auto& piece : dist.pieces()) {
    std::vector<double> xs{piece.lo};
    for (double k : kinks) {
      if (k > piece.lo && k < piece.hi) xs.push_back(k);
    }
    xs.push_back(piece.hi);
    std::sort(xs.begin(), xs.end());
    for (std::size_t s = 0; s + 1 < xs.size(); ++s) {
      const double lo = xs[s];
      const double hi = xs[s + 1];
      const double step = (hi - lo) / panels;
      double acc = h(lo) + h(hi);
      for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * h(lo + i * step);
      total += piece.density * acc * step / 3.0;
    }
  }
  return total;
}

inline double quad_clipped(const JamDistribution& dist, double beta, int k) {
  return expect(dist, [&](double a) { return std::pow(std::max(beta, a), k); }, {beta});
}

inline double quad_residual(const JamDistribution& dist, double beta) {
  return beta - quad_clipped(dist, beta, 2) / (2.0 * quad_clipped(dist, beta, 1));
}

// Scans [0, upper] on a fine grid for the first sign change, then bisects it.
inline double scan_root(const std::function<double(double)>& f, double upper, int points = 4000) {
  double prev_x = 0.0;
  double prev = f(0.0);
  for (int i = 1; i <= points; ++i) {
    const double x = upper * i / points;
    const double v = f(x);
    if ((prev < 0.0) != (v < 0.0)) {
      double lo = prev_x;
      double hi = x;
      for (int it = 0; it < 200; ++it) {
        const double mid = (lo + hi) / 2.0;
        ((f(mid) < 0.0) == (prev < 0.0) ? lo : hi) = mid;
      }
      return (lo + hi) / 2.0;
    }
    prev_x = x;
    prev = v;
  }
  return std::nan("");
}

// Random valid laws on [0, a_max]: a few atoms plus a few disjoint pieces.
inline JamDistribution random_distribution(std::mt19937_64& rng, double a_max, bool allow_pieces = true) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> count(0, 3);
  std::vector<Atom> atoms;
  std::vector<Piece> pieces;
  const int n_atoms = count(rng);
  for (int i = 0; i < n_atoms; ++i) atoms.push_back({unit(rng) * a_max, 0.1 + unit(rng)});
  if (allow_pieces) {
    const int n_pieces = count(rng);
    std::vector<double> cuts;
    for (int i = 0; i < 2 * n_pieces; ++i) cuts.push_back(unit(rng) * a_max);
    std::sort(cuts.begin(), cuts.end());
    for (int i = 0; i < n_pieces; ++i) {
      if (cuts[2 * i + 1] > cuts[2 * i]) pieces.push_back({cuts[2 * i], cuts[2 * i + 1], 0.1 + unit(rng)});
    }
  }
  if (atoms.empty() && pieces.empty()) atoms.push_back({0.5 * a_max, 1.0});
  double total = 0.0;
  for (const auto& a : atoms) total += a.mass;
  for (const auto& p : pieces) total += p.density * (p.hi - p.lo);
  for (auto& a : atoms) a.mass /= total;
  for (auto& p : pieces) p.density /= total;
  return JamDistribution::create(std::move(atoms), std::move(pieces));
}

}  // namespace jamgame::testing
