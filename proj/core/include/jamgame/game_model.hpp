#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

namespace jamgame {

/// Probability normalization tolerance used by feasibility checks.
inline constexpr double kMassTolerance = 1e-12;
/// Construction rescales total mass inside [1 - w, 1 + w] and rejects anything else.
inline constexpr double kNormalizeWindow = 1e-9;
/// Atoms closer than this are coalesced on construction.
inline constexpr double kAtomMergeTolerance = 1e-12;

/// Maximum and average jamming time of one game instance. Obtain via
/// validate_config(); 0 < a_avg <= a_max < inf holds for every instance.
struct GameConfig {
  double a_max = 0.0;
  double a_avg = 0.0;
};

GameConfig validate_config(double a_max, double a_avg);

struct Atom {
  double location = 0.0;
  double mass = 0.0;
};

/// Constant density on [lo, hi).
struct Piece {
  double lo = 0.0;
  double hi = 0.0;
  double density = 0.0;
};

/// Jamming-time law: point atoms plus a piecewise-constant density on [0, inf).
///
/// Instances are immutable. create() drops zero-weight parts, coalesces atoms
/// within kAtomMergeTolerance, and rescales the total mass to one when it is
/// already within kNormalizeWindow. Atoms are kept sorted by location and
/// pieces sorted by lo; pieces never overlap.
class JamDistribution {
 public:
  static JamDistribution create(std::vector<Atom> atoms, std::vector<Piece> pieces = {});
  static JamDistribution point_mass(double location);
  static JamDistribution uniform(double lo, double hi);

  std::span<const Atom> atoms() const { return atoms_; }
  std::span<const Piece> pieces() const { return pieces_; }

  double total_mass() const { return total_mass_; }
  double support_min() const { return support_min_; }
  double support_max() const { return support_max_; }

  /// Right-continuous CDF; exactly 1 from support_max() on.
  double cdf(double a) const;
  /// Smallest a with cdf(a) >= p. quantile(0) is support_min().
  double quantile(double p) const;

 private:
  JamDistribution() = default;
  void build_table();

  // One breakpoint of the CDF: the mass strictly left of x, the atom at x and
  // the density on [x, next breakpoint).
  struct Knot {
    double x;
    double below;
    double jump;
    double density_after;
  };

  std::vector<Atom> atoms_;
  std::vector<Piece> pieces_;
  std::vector<Knot> knots_;
  double total_mass_ = 0.0;
  double support_min_ = 0.0;
  double support_max_ = 0.0;
};

double mean(const JamDistribution& dist);

struct FeasibilityReport {
  double mean = 0.0;
  double total_mass = 0.0;
  double support_min = 0.0;
  double support_max = 0.0;
  bool mean_ok = false;
  bool support_ok = false;
  bool mass_ok = false;
  std::vector<std::string> violations;

  bool feasible() const { return mean_ok && support_ok && mass_ok; }
};

FeasibilityReport check_feasibility(const JamDistribution& dist, const GameConfig& cfg);

struct MixtureComponent {
  JamDistribution dist;
  double weight = 0.0;
};

/// Weighted mixture. Weights must be non-negative and sum to one within kMassTolerance.
JamDistribution mix(std::span<const MixtureComponent> components);

// Sampling policies. Only stationary deterministic rules D_n = u(A_n) exist here.

struct Threshold {
  double beta = 0.0;
};

struct ZeroWait {};

struct TabulatedKnot {
  double a = 0.0;
  double delay = 0.0;
};

/// Piecewise-linear delay through the knots, held constant outside them.
struct Tabulated {
  std::vector<TabulatedKnot> knots;
};

class SamplingPolicy {
 public:
  using Rule = std::variant<Threshold, ZeroWait, Tabulated>;

  static SamplingPolicy threshold(double beta);
  static SamplingPolicy zero_wait();
  static SamplingPolicy tabulated(std::vector<TabulatedKnot> knots);

  const Rule& rule() const { return rule_; }
  const Threshold* as_threshold() const { return std::get_if<Threshold>(&rule_); }
  const Tabulated* as_tabulated() const { return std::get_if<Tabulated>(&rule_); }
  bool is_zero_wait() const { return std::holds_alternative<ZeroWait>(rule_); }
  std::string kind() const;

  /// u(a) >= 0.
  double delay(double a) const;
  /// a + u(a). Threshold rules return max(beta, a) directly so the
  /// water-filling identity holds bit-for-bit.
  double interval(double a) const;
  /// Points where interval() changes slope.
  std::vector<double> breakpoints() const;

 private:
  explicit SamplingPolicy(Rule rule) : rule_(std::move(rule)) {}
  Rule rule_;
};

/// One stage of the sample path: jam A_n, delay D_n, interval L_n = A_n + D_n
/// and the delivery epoch S_n (S_0 = 0).
struct StagePath {
  double jam = 0.0;
  double delay = 0.0;
  double interval = 0.0;
  double sample_epoch = 0.0;
};

}  // namespace jamgame
