#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jamgame/game_model.hpp"

namespace jamgame {

// Brute-force checks of the attacker side over discretized feasible laws.
//
// Candidate families on the support grid {0, h, 2h, ..., a_max}:
//   TwoPoint     point masses at or below a_avg, plus every pair x < a_avg < y
//                with masses that make the mean exactly a_avg;
//   ThreePoint   every triple of grid points with positive masses on the
//                mass_step lattice and mean <= a_avg;
//   SimplexGrid  every mass vector on the mass_step lattice with mean <= a_avg.
//
// Enumeration follows a fixed canonical order and is split into fixed tasks,
// so every reduction is independent of the number of worker threads.

enum class GridFamily { TwoPoint, ThreePoint, SimplexGrid };

std::string_view to_string(GridFamily family) noexcept;
GridFamily parse_grid_family(std::string_view name);

struct SearchGrid {
  double support_step = 0.0;
  double mass_step = 0.0;
  GridFamily family = GridFamily::TwoPoint;
};

/// Throws InvalidGrid unless support_step divides a_max within 1e-9 and
/// mass_step is in (0, 1]; lattice families also need 1 / mass_step integral.
void validate_grid(const SearchGrid& grid, const GameConfig& cfg);

/// CI profile: support a_max/16, mass 1/64. Deep profile: a_max/64, mass 1/256.
SearchGrid ci_grid(const GameConfig& cfg, GridFamily family = GridFamily::TwoPoint);
SearchGrid deep_grid(const GameConfig& cfg, GridFamily family = GridFamily::TwoPoint);

/// Serial walk over every candidate in canonical order.
void for_each_candidate(const GameConfig& cfg, const SearchGrid& grid,
                        const std::function<void(std::span<const Atom>)>& visit);

double total_variation(const JamDistribution& lhs, const JamDistribution& rhs);

struct AttackerSearchResult {
  GameConfig config;
  SearchGrid grid;
  std::uint64_t candidates = 0;
  JamDistribution best;
  double best_beta = 0.0;
  /// TimeAverage age of the best candidate under its own best response.
  double best_age = 0.0;
  double equilibrium_age = 0.0;
  /// equilibrium_age - best_age; negative means a candidate beat the closed form.
  double gap = 0.0;
  double total_variation = 0.0;  // best vs the equilibrium law
};

/// Maximizes the best-response age over the grid. Ties within 1e-12
/// (relative) go to the larger variance, then to the earlier candidate.
AttackerSearchResult brute_force_attacker(const GameConfig& cfg, const SearchGrid& grid,
                                          unsigned threads = 0);

struct ResidualPoint {
  double beta = 0.0;
  double residual = 0.0;
  /// Points at or below beta* are listed for reference and not judged.
  bool reference = false;
};

struct ResidualDominanceReport {
  GameConfig config;
  double beta_star = 0.0;
  std::vector<ResidualPoint> points;
  double min_residual = 0.0;        // over judged points
  double min_slope = 0.0;           // finite differences and secants inside (beta*, a_max)
  double slope_floor = 0.5 - 1e-6;
  bool residuals_positive = false;
  bool slope_ok = false;

  bool passed() const { return residuals_positive && slope_ok; }
};

/// beta_count points evenly spaced in (beta*, a_max].
std::vector<double> residual_check_grid(const GameConfig& cfg, int beta_count = 100);

/// Above beta* the residual of the equilibrium law must be positive with
/// slope above 1/2. Finite differences use step 1e-5.
ResidualDominanceReport check_residual_dominance(const GameConfig& cfg,
                                                 std::span<const double> beta_grid);

struct ExtremalGReport {
  double beta = 0.0;
  double g_equilibrium = 0.0;
  double max_g = 0.0;
  std::vector<Atom> argmax;
  std::uint64_t candidates = 0;
  std::uint64_t undefined = 0;  // candidates with E[max{beta, A}] = 0
  std::uint64_t violations = 0; // g(beta, f) > g(beta, f*) + 1e-9
  bool passed() const { return violations == 0; }
};

/// For a fixed beta the equilibrium law must maximize g(beta, .) over the grid.
ExtremalGReport check_extremal_g(const GameConfig& cfg, double beta, const SearchGrid& grid,
                                 unsigned threads = 0);
/// Same check for several betas with a single enumeration pass.
std::vector<ExtremalGReport> check_extremal_g(const GameConfig& cfg, std::span<const double> betas,
                                              const SearchGrid& grid, unsigned threads = 0);

struct NearOptimalCandidate {
  std::vector<Atom> atoms;
  double age = 0.0;
  double total_variation = 0.0;
};

struct UniquenessReport {
  double equilibrium_age = 0.0;
  double tol = 0.0;
  double mass_step = 0.0;
  std::uint64_t candidates = 0;
  std::uint64_t near_optimal_count = 0;
  /// First kNearOptimalListCap near-optimal candidates in canonical order.
  std::vector<NearOptimalCandidate> near_optimal;
  double max_total_variation = 0.0;

  /// Every near-optimal candidate lies within mass_step of f* in total variation.
  bool unique() const { return max_total_variation <= mass_step + 1e-12; }
};

inline constexpr std::size_t kNearOptimalListCap = 1000;

UniquenessReport uniqueness_probe(const GameConfig& cfg, const SearchGrid& grid, double tol,
                                  unsigned threads = 0);

}  // namespace jamgame
