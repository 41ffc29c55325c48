#include "jamgame/response_solver.hpp"

#include <cmath>
#include <sstream>

#include "jamgame/error.hpp"

namespace jamgame {

namespace {

int count_sign_changes(const JamDistribution& dist, double upper, int points) {
  int changes = 0;
  int last = 0;
  for (int i = 0; i <= points; ++i) {
    const double beta = upper * static_cast<double>(i) / points;
    double r = 0.0;
    try {
      r = br_residual(beta, dist);
    } catch (const Error&) {
      continue;
    }
    const int s = r > 0.0 ? 1 : (r < 0.0 ? -1 : 0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

BestResponseResult solve_best_response(const JamDistribution& dist,
                                       const BestResponseOptions& options) {
  if (!(mean(dist) > 0.0)) {
    throw Error(Errc::InvalidArgument, "best response needs a jamming law with positive mean");
  }
  if (!(options.tol > 0.0)) throw Error(Errc::InvalidArgument, "tolerance must be positive");

  double lo = 0.0;
  double hi = options.upper.value_or(dist.support_max());
  const double r_lo = br_residual(lo, dist);
  const double r_hi = br_residual(hi, dist);
  if (!(r_lo < 0.0 && r_hi > 0.0)) {
    throw Error(Errc::NoBracket, "residual signs at [0, " + fmt(hi) + "] are " + fmt(r_lo) +
                                     ", " + fmt(r_hi));
  }

  BestResponseResult out;
  out.bracket_upper = hi;
  double beta = hi;
  double r = r_hi;
  int it = 0;
  while (it < options.max_iterations) {
    ++it;
    const double mid = lo + (hi - lo) / 2.0;
    if (mid <= lo || mid >= hi) break;  // bracket exhausted at double resolution
    beta = mid;
    r = br_residual(mid, dist);
    if (std::abs(r) <= options.tol) break;
    (r < 0.0 ? lo : hi) = mid;
  }
  out.beta = beta;
  out.residual = r;
  out.iterations = it;
  if (options.scan_points > 0) {
    out.sign_changes = count_sign_changes(dist, out.bracket_upper, options.scan_points);
  }
  return out;
}

SamplingPolicy best_response(const JamDistribution& dist, double tol) {
  BestResponseOptions options;
  options.tol = tol;
  return solve_best_response(dist, options).policy();
}

JamDistribution equilibrium_distribution(const GameConfig& cfg) {
  const double top = cfg.a_avg / cfg.a_max;
  return JamDistribution::create({{0.0, 1.0 - top}, {cfg.a_max, top}});
}

double beta_star_closed_form(const GameConfig& cfg) {
  const double s_avg = std::sqrt(cfg.a_avg);
  return s_avg / (std::sqrt(cfg.a_max) + s_avg) * cfg.a_max;
}

double beta_star_quadratic(const GameConfig& cfg) {
  const double q = 1.0 - cfg.a_avg / cfg.a_max;
  const double b = 2.0 * cfg.a_avg;
  const double c = -cfg.a_avg * cfg.a_max;
  if (q == 0.0) return -c / b;  // a_avg = a_max: 2 a_avg b = a_avg a_max
  // Citardauq form: no cancellation, since b > 0 and c < 0.
  return -2.0 * c / (b + std::sqrt(b * b - 4.0 * q * c));
}

EquilibriumSolution equilibrium(const GameConfig& cfg) {
  const GameConfig checked = validate_config(cfg.a_max, cfg.a_avg);
  auto dist = equilibrium_distribution(checked);
  const double beta = beta_star_closed_form(checked);
  auto policy = SamplingPolicy::threshold(beta);
  const AgeValue age = average_age(dist, policy);
  EquilibriumResiduals res;
  res.fixed_point = br_residual(beta, dist);
  res.quadratic = beta - beta_star_quadratic(checked);
  res.mean_slack = checked.a_avg - mean(dist);
  return EquilibriumSolution{checked, std::move(dist), beta, std::move(policy), age, res};
}

bool VerificationReport::passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

const Check* VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

VerificationReport verify_equilibrium(const EquilibriumSolution& sol, double tol) {
  VerificationReport report;
  const auto& cfg = sol.config;

  {
    const auto f = check_feasibility(sol.dist, cfg);
    const double slack = cfg.a_avg - f.mean;
    Check c{"feasibility", f.feasible() && std::abs(slack) <= tol, f.mean, ""};
    c.detail = "mean " + fmt(f.mean) + " vs a_avg " + fmt(cfg.a_avg);
    for (const auto& v : f.violations) c.detail += "; " + v;
    report.checks.push_back(std::move(c));
  }
  {
    double r = 0.0;
    std::string detail;
    bool ok = false;
    try {
      r = br_residual(sol.beta_star, sol.dist);
      ok = std::abs(r) <= tol;
      detail = "br_residual(beta*) = " + fmt(r);
    } catch (const Error& e) {
      detail = e.what();
    }
    report.checks.push_back({"fixed_point", ok, r, detail});
  }
  {
    const bool ok = sol.beta_star > 0.0 && sol.beta_star < cfg.a_max;
    report.checks.push_back({"interior", ok, sol.beta_star,
                             "beta* = " + fmt(sol.beta_star) + " in (0, " + fmt(cfg.a_max) + ")"});
  }
  {
    const double closed = beta_star_closed_form(cfg);
    const double quad = beta_star_quadratic(cfg);
    const double gap = std::abs(sol.beta_star - quad);
    report.checks.push_back({"quadratic_root", gap <= tol && std::abs(closed - quad) <= tol, gap,
                             "closed form " + fmt(closed) + ", quadratic root " + fmt(quad)});
  }
  {
    double gap = 0.0;
    std::string detail;
    bool ok = false;
    try {
      BestResponseOptions options;
      options.upper = cfg.a_max;
      const auto br = solve_best_response(sol.dist, options);
      gap = std::abs(br.beta - sol.beta_star);
      ok = gap <= tol;
      detail = "bisection beta " + fmt(br.beta) + ", sign changes " + std::to_string(br.sign_changes);
    } catch (const Error& e) {
      detail = e.what();
    }
    report.checks.push_back({"bisection_recovery", ok, gap, detail});
  }
  return report;
}

}  // namespace jamgame
