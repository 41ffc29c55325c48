#pragma once

#include "jamgame/game_model.hpp"

namespace jamgame {

/// TimeAverage is the long-run time average of the sawtooth, E[L^2] / (2 E[L]).
/// StageRatio drops the 1/2 and is the form the g-ratio uses.
enum class AgeConvention { TimeAverage, StageRatio };

struct AgeValue {
  double value = 0.0;
  AgeConvention convention = AgeConvention::TimeAverage;

  AgeValue as(AgeConvention target) const;
};

/// E[max{beta, A}^k] for k in {1, 2}, in closed form.
double clipped_moment(const JamDistribution& dist, double beta, int k);

/// Renewal-reward age of the (law, policy) pair, TimeAverage convention.
/// Throws ZeroStageLength when E[A + u(A)] = 0.
AgeValue average_age(const JamDistribution& dist, const SamplingPolicy& policy);

/// g(beta, f) = E[max{beta, A}^2] / E[max{beta, A}].
double g_ratio(double beta, const JamDistribution& dist);

/// beta - g(beta, f) / 2. The root is the best-response water level.
double br_residual(double beta, const JamDistribution& dist);

}  // namespace jamgame
