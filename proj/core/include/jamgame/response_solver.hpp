#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jamgame/age_analytics.hpp"
#include "jamgame/game_model.hpp"

namespace jamgame {

struct BestResponseOptions {
  /// Stop once |br_residual| <= tol.
  double tol = 1e-10;
  int max_iterations = 200;
  /// Grid points for the sign-change scan; 0 disables it.
  int scan_points = 1000;
  /// Right end of the bracket. Defaults to the support maximum of the law,
  /// where the residual is support_max / 2 > 0.
  std::optional<double> upper;
};

struct BestResponseResult {
  double beta = 0.0;
  double residual = 0.0;
  int iterations = 0;
  double bracket_upper = 0.0;
  /// Sign changes of the residual seen by the scan (-1 when the scan is off).
  int sign_changes = -1;

  SamplingPolicy policy() const { return SamplingPolicy::threshold(beta); }
};

/// Bisection for the water level beta = g(beta, f) / 2 on [0, upper].
/// Requires mean(dist) > 0.
BestResponseResult solve_best_response(const JamDistribution& dist,
                                       const BestResponseOptions& options = {});

SamplingPolicy best_response(const JamDistribution& dist, double tol = 1e-10);

/// (1 - a_avg/a_max) at 0 plus a_avg/a_max at a_max.
JamDistribution equilibrium_distribution(const GameConfig& cfg);

/// sqrt(a_avg) / (sqrt(a_max) + sqrt(a_avg)) * a_max.
double beta_star_closed_form(const GameConfig& cfg);

/// Positive root of (1 - a_avg/a_max) b^2 + 2 a_avg b - a_avg a_max = 0.
double beta_star_quadratic(const GameConfig& cfg);

struct EquilibriumResiduals {
  double fixed_point = 0.0;  // br_residual(beta*, f*)
  double quadratic = 0.0;    // closed form minus quadratic root
  double mean_slack = 0.0;   // a_avg - mean(f*)
};

struct EquilibriumSolution {
  GameConfig config;
  JamDistribution dist;
  double beta_star = 0.0;
  SamplingPolicy policy;
  AgeValue age;
  EquilibriumResiduals residuals;
};

EquilibriumSolution equilibrium(const GameConfig& cfg);

struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;
  std::string detail;
};

struct VerificationReport {
  std::vector<Check> checks;

  bool passed() const;
  const Check* find(const std::string& name) const;
};

/// Runs the five equilibrium checks: feasibility with a binding mean, fixed
/// point, interior water level, closed form vs quadratic, and bisection
/// recovery of beta*.
VerificationReport verify_equilibrium(const EquilibriumSolution& sol, double tol = 1e-9);

}  // namespace jamgame
