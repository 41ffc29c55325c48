#include "jamgame/age_analytics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "jamgame/error.hpp"

namespace jamgame {

namespace {

void require_beta(double beta) {
  if (!std::isfinite(beta)) throw Error(Errc::NonFinite, "beta is not finite");
  if (beta < 0.0) throw Error(Errc::InvalidArgument, "beta must be non-negative");
}

struct Moments {
  double first = 0.0;
  double second = 0.0;
};

// Exact first and second moments of L(a) = policy.interval(a). L is linear
// between consecutive policy breakpoints, so each sub-interval of a density
// piece integrates in closed form from its endpoint values.
Moments interval_moments(const JamDistribution& dist, const SamplingPolicy& policy) {
  Moments m;
  for (const auto& atom : dist.atoms()) {
    const double l = policy.interval(atom.location);
    m.first += atom.mass * l;
    m.second += atom.mass * l * l;
  }
  const auto cuts = policy.breakpoints();
  for (const auto& piece : dist.pieces()) {
    std::vector<double> xs{piece.lo};
    for (double c : cuts) {
      if (c > piece.lo && c < piece.hi) xs.push_back(c);
    }
    xs.push_back(piece.hi);
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      const double w = piece.density * (xs[i + 1] - xs[i]);
      const double l0 = policy.interval(xs[i]);
      const double l1 = policy.interval(xs[i + 1]);
      m.first += w * (l0 + l1) / 2.0;
      m.second += w * (l0 * l0 + l0 * l1 + l1 * l1) / 3.0;
    }
  }
  return m;
}

}  // namespace

AgeValue AgeValue::as(AgeConvention target) const {
  if (target == convention) return *this;
  if (target == AgeConvention::StageRatio) return {value * 2.0, target};
  return {value / 2.0, target};
}

double clipped_moment(const JamDistribution& dist, double beta, int k) {
  require_beta(beta);
  if (k != 1 && k != 2) {
    throw Error(Errc::MomentOrder, "clipped moment order must be 1 or 2, got " + std::to_string(k));
  }
  const double beta_k = k == 1 ? beta : beta * beta;
  double total = 0.0;
  for (const auto& atom : dist.atoms()) {
    const double v = std::max(beta, atom.location);
    total += atom.mass * (k == 1 ? v : v * v);
  }
  for (const auto& piece : dist.pieces()) {
    const double below = std::clamp(beta, piece.lo, piece.hi) - piece.lo;
    total += piece.density * beta_k * below;
    if (piece.hi > beta) {
      const double from = std::max(piece.lo, beta);
      const double upper = k == 1 ? piece.hi * piece.hi - from * from
                                  : piece.hi * piece.hi * piece.hi - from * from * from;
      total += piece.density * upper / (k + 1);
    }
  }
  return total;
}

AgeValue average_age(const JamDistribution& dist, const SamplingPolicy& policy) {
  double first = 0.0;
  double second = 0.0;
  if (const auto* t = policy.as_threshold()) {
    first = clipped_moment(dist, t->beta, 1);
    second = clipped_moment(dist, t->beta, 2);
  } else if (policy.is_zero_wait()) {
    first = clipped_moment(dist, 0.0, 1);
    second = clipped_moment(dist, 0.0, 2);
  } else {
    const auto m = interval_moments(dist, policy);
    first = m.first;
    second = m.second;
  }
  if (!(first > 0.0)) {
    throw Error(Errc::ZeroStageLength, "expected stage length E[A + u(A)] is zero");
  }
  return {second / (2.0 * first), AgeConvention::TimeAverage};
}

double g_ratio(double beta, const JamDistribution& dist) {
  const double den = clipped_moment(dist, beta, 1);
  if (!(den > 0.0)) {
    throw Error(Errc::ZeroDenominator, "E[max{beta, A}] is zero (beta = 0 with all mass at 0)");
  }
  return clipped_moment(dist, beta, 2) / den;
}

double br_residual(double beta, const JamDistribution& dist) {
  return beta - g_ratio(beta, dist) / 2.0;
}

}  // namespace jamgame
