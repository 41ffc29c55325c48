#include "jamgame/adversary_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "jamgame/age_analytics.hpp"
#include "jamgame/error.hpp"
#include "jamgame/parallel.hpp"
#include "jamgame/response_solver.hpp"

namespace jamgame {

namespace {

constexpr double kGridTolerance = 1e-9;
constexpr double kTieTolerance = 1e-12;
constexpr double kExtremalSlack = 1e-9;
constexpr double kFiniteDifferenceStep = 1e-5;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

bool needs_lattice(GridFamily f) { return f != GridFamily::TwoPoint; }

// Integer description of a validated grid.
struct Lattice {
  GridFamily family;
  double a_max;
  double a_avg;
  int intervals;        // K: support points are i * a_max / K for i = 0..K
  std::int64_t units;   // N: masses are multiples of 1 / N
  std::int64_t budget;  // sum of i * c_i allowed by the mean constraint

  int points() const { return intervals + 1; }
  double location(int i) const { return i == intervals ? a_max : a_max * i / intervals; }
};

Lattice make_lattice(const GameConfig& cfg, const SearchGrid& grid) {
  validate_grid(grid, cfg);
  Lattice l{};
  l.family = grid.family;
  l.a_max = cfg.a_max;
  l.a_avg = cfg.a_avg;
  l.intervals = static_cast<int>(std::llround(cfg.a_max / grid.support_step));
  l.units = std::llround(1.0 / grid.mass_step);
  l.budget = static_cast<std::int64_t>(std::floor(
      cfg.a_avg * static_cast<double>(l.intervals) * static_cast<double>(l.units) / cfg.a_max + 1e-9));
  return l;
}

// Fixed work split: tasks are independent slices of the canonical order.
class Enumerator {
 public:
  explicit Enumerator(Lattice lattice) : l_(lattice) {
    if (l_.family == GridFamily::SimplexGrid && l_.points() >= 3) {
      for (std::int64_t c0 = 0; c0 <= l_.units; ++c0) {
        for (std::int64_t c1 = 0; c0 + c1 <= l_.units; ++c1) {
          if (c1 + 2 * (l_.units - c0 - c1) <= l_.budget) prefixes_.push_back({c0, c1});
        }
      }
    } else if (l_.family == GridFamily::SimplexGrid) {
      for (std::int64_t c0 = 0; c0 <= l_.units; ++c0) {
        if (l_.units - c0 <= l_.budget) prefixes_.push_back({c0, -1});
      }
    }
  }

  std::size_t task_count() const {
    return l_.family == GridFamily::SimplexGrid ? prefixes_.size()
                                                : static_cast<std::size_t>(l_.points());
  }

  template <class Visit>
  void run(std::size_t task, Visit&& visit) const {
    switch (l_.family) {
      case GridFamily::TwoPoint: return run_two_point(static_cast<int>(task), visit);
      case GridFamily::ThreePoint: return run_three_point(static_cast<int>(task), visit);
      case GridFamily::SimplexGrid: return run_simplex(task, visit);
    }
  }

 private:
  template <class Visit>
  void run_two_point(int i, Visit& visit) const {
    const double x = l_.location(i);
    std::vector<Atom> atoms;
    if (x <= l_.a_avg + kMassTolerance) {
      atoms = {{x, 1.0}};
      visit(std::span<const Atom>(atoms));
    }
    if (!(x < l_.a_avg)) return;
    for (int j = i + 1; j < l_.points(); ++j) {
      const double y = l_.location(j);
      if (!(y > l_.a_avg)) continue;
      const double p = (l_.a_avg - x) / (y - x);
      atoms = {{x, 1.0 - p}, {y, p}};
      visit(std::span<const Atom>(atoms));
    }
  }

  template <class Visit>
  void run_three_point(int i, Visit& visit) const {
    const auto n = l_.units;
    const double unit = 1.0 / static_cast<double>(n);
    std::vector<Atom> atoms(3);
    for (int j = i + 1; j < l_.points(); ++j) {
      for (int k = j + 1; k < l_.points(); ++k) {
        for (std::int64_t ci = 1; ci <= n - 2; ++ci) {
          for (std::int64_t cj = 1; ci + cj <= n - 1; ++cj) {
            const std::int64_t ck = n - ci - cj;
            if (i * ci + j * cj + k * ck > l_.budget) continue;
            atoms[0] = {l_.location(i), static_cast<double>(ci) * unit};
            atoms[1] = {l_.location(j), static_cast<double>(cj) * unit};
            atoms[2] = {l_.location(k), static_cast<double>(ck) * unit};
            visit(std::span<const Atom>(atoms));
          }
        }
      }
    }
  }

  template <class Visit>
  void run_simplex(std::size_t task, Visit& visit) const {
    std::vector<std::int64_t> counts(static_cast<std::size_t>(l_.points()), 0);
    std::vector<Atom> atoms;
    const auto [c0, c1] = prefixes_[task];
    counts[0] = c0;
    if (c1 < 0) {
      counts[1] = l_.units - c0;
      emit(counts, atoms, visit);
      return;
    }
    counts[1] = c1;
    descend(2, l_.units - c0 - c1, c1, counts, atoms, visit);
  }

  template <class Visit>
  void descend(int depth, std::int64_t remaining, std::int64_t weight,
               std::vector<std::int64_t>& counts, std::vector<Atom>& atoms, Visit& visit) const {
    if (depth == l_.points() - 1) {
      if (weight + depth * remaining > l_.budget) return;
      counts[static_cast<std::size_t>(depth)] = remaining;
      emit(counts, atoms, visit);
      return;
    }
    // Placing c here leaves at least (depth + 1) * (remaining - c) of weight.
    const std::int64_t start = std::max<std::int64_t>(0, weight + (depth + 1) * remaining - l_.budget);
    for (std::int64_t c = start; c <= remaining; ++c) {
      counts[static_cast<std::size_t>(depth)] = c;
      descend(depth + 1, remaining - c, weight + depth * c, counts, atoms, visit);
    }
    counts[static_cast<std::size_t>(depth)] = 0;
  }

  template <class Visit>
  void emit(const std::vector<std::int64_t>& counts, std::vector<Atom>& atoms, Visit& visit) const {
    atoms.clear();
    const double unit = 1.0 / static_cast<double>(l_.units);
    for (int i = 0; i < l_.points(); ++i) {
      const auto c = counts[static_cast<std::size_t>(i)];
      if (c > 0) atoms.push_back({l_.location(i), static_cast<double>(c) * unit});
    }
    visit(std::span<const Atom>(atoms));
  }

  Lattice l_;
  std::vector<std::pair<std::int64_t, std::int64_t>> prefixes_;
};

struct Scored {
  std::vector<Atom> atoms;
  double beta = 0.0;
  double age = 0.0;
  double variance = 0.0;
};

// Best-response age of one candidate, through the same calls a user makes.
Scored score(std::span<const Atom> atoms) {
  Scored s;
  s.atoms.assign(atoms.begin(), atoms.end());
  const auto dist = JamDistribution::create(s.atoms);
  const double m = mean(dist);
  s.variance = clipped_moment(dist, 0.0, 2) - m * m;
  if (!(m > 0.0)) return s;  // never jamming: the age can be driven to zero
  BestResponseOptions options;
  options.scan_points = 0;
  s.beta = solve_best_response(dist, options).beta;
  s.age = average_age(dist, SamplingPolicy::threshold(s.beta)).value;
  return s;
}

bool improves(const Scored& cand, const Scored& incumbent) {
  const double eps = kTieTolerance * std::max(1.0, std::abs(incumbent.age));
  if (cand.age > incumbent.age + eps) return true;
  if (cand.age < incumbent.age - eps) return false;
  const double veps = kTieTolerance * std::max(1.0, std::abs(incumbent.variance));
  return cand.variance > incumbent.variance + veps;
}

}  // namespace

std::string_view to_string(GridFamily family) noexcept {
  switch (family) {
    case GridFamily::TwoPoint: return "two_point";
    case GridFamily::ThreePoint: return "three_point";
    case GridFamily::SimplexGrid: return "simplex_grid";
  }
  return "unknown";
}

GridFamily parse_grid_family(std::string_view name) {
  if (name == "two_point" || name == "TwoPoint") return GridFamily::TwoPoint;
  if (name == "three_point" || name == "ThreePoint") return GridFamily::ThreePoint;
  if (name == "simplex_grid" || name == "SimplexGrid") return GridFamily::SimplexGrid;
  throw Error(Errc::Parse, "unknown grid family '" + std::string(name) + "'");
}

void validate_grid(const SearchGrid& grid, const GameConfig& cfg) {
  if (!std::isfinite(grid.support_step) || !(grid.support_step > 0.0) ||
      grid.support_step > cfg.a_max * (1.0 + kGridTolerance)) {
    throw Error(Errc::InvalidGrid, "support_step must be in (0, a_max], got " + fmt(grid.support_step));
  }
  const double k = cfg.a_max / grid.support_step;
  if (std::abs(k - std::round(k)) > kGridTolerance * std::max(1.0, k)) {
    throw Error(Errc::InvalidGrid, "support_step " + fmt(grid.support_step) + " does not divide a_max " +
                                       fmt(cfg.a_max));
  }
  if (!std::isfinite(grid.mass_step) || !(grid.mass_step > 0.0) || grid.mass_step > 1.0) {
    throw Error(Errc::InvalidGrid, "mass_step must be in (0, 1], got " + fmt(grid.mass_step));
  }
  if (needs_lattice(grid.family)) {
    const double n = 1.0 / grid.mass_step;
    if (std::abs(n - std::round(n)) > kGridTolerance * std::max(1.0, n)) {
      throw Error(Errc::InvalidGrid, "1 / mass_step must be an integer for " +
                                         std::string(to_string(grid.family)));
    }
    if (grid.family == GridFamily::ThreePoint && (std::llround(k) < 2 || std::llround(n) < 3)) {
      throw Error(Errc::InvalidGrid, "three_point needs at least 3 support points and 3 mass units");
    }
  }
}

SearchGrid ci_grid(const GameConfig& cfg, GridFamily family) {
  return {cfg.a_max / 16.0, 1.0 / 64.0, family};
}

SearchGrid deep_grid(const GameConfig& cfg, GridFamily family) {
  return {cfg.a_max / 64.0, 1.0 / 256.0, family};
}

void for_each_candidate(const GameConfig& cfg, const SearchGrid& grid,
                        const std::function<void(std::span<const Atom>)>& visit) {
  const Enumerator e(make_lattice(cfg, grid));
  for (std::size_t t = 0; t < e.task_count(); ++t) e.run(t, visit);
}

double total_variation(const JamDistribution& lhs, const JamDistribution& rhs) {
  double tv = 0.0;
  std::vector<Atom> diff;
  for (const auto& a : lhs.atoms()) diff.push_back({a.location, a.mass});
  for (const auto& a : rhs.atoms()) diff.push_back({a.location, -a.mass});
  std::sort(diff.begin(), diff.end(), [](const Atom& l, const Atom& r) { return l.location < r.location; });
  for (std::size_t i = 0; i < diff.size();) {
    double net = 0.0;
    const double at = diff[i].location;
    for (; i < diff.size() && diff[i].location - at <= kAtomMergeTolerance; ++i) net += diff[i].mass;
    tv += std::abs(net);
  }

  std::vector<double> cuts;
  for (const auto* d : {&lhs, &rhs}) {
    for (const auto& p : d->pieces()) {
      cuts.push_back(p.lo);
      cuts.push_back(p.hi);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  auto density_at = [](const JamDistribution& d, double x) {
    for (const auto& p : d.pieces()) {
      if (p.lo <= x && x < p.hi) return p.density;
    }
    return 0.0;
  };
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = (cuts[i] + cuts[i + 1]) / 2.0;
    tv += std::abs(density_at(lhs, mid) - density_at(rhs, mid)) * (cuts[i + 1] - cuts[i]);
  }
  return tv / 2.0;
}

AttackerSearchResult brute_force_attacker(const GameConfig& cfg, const SearchGrid& grid,
                                          unsigned threads) {
  const Enumerator e(make_lattice(cfg, grid));
  struct Partial {
    std::optional<Scored> best;
    std::uint64_t count = 0;
  };
  std::vector<Partial> partial(e.task_count());
  parallel_for(partial.size(), resolve_workers(threads), [&](std::size_t t) {
    Partial& acc = partial[t];
    e.run(t, [&](std::span<const Atom> atoms) {
      ++acc.count;
      Scored s = score(atoms);
      if (!acc.best || improves(s, *acc.best)) acc.best = std::move(s);
    });
  });

  std::optional<Scored> best;
  std::uint64_t count = 0;
  for (auto& p : partial) {
    count += p.count;
    if (p.best && (!best || improves(*p.best, *best))) best = std::move(p.best);
  }
  if (!best) throw Error(Errc::InvalidGrid, "grid has no feasible candidate");

  const auto eq = equilibrium(cfg);
  auto dist = JamDistribution::create(best->atoms);
  const double tv = total_variation(dist, eq.dist);
  return AttackerSearchResult{cfg,        grid,        count,           std::move(dist),
                              best->beta, best->age,   eq.age.value,    eq.age.value - best->age,
                              tv};
}

std::vector<double> residual_check_grid(const GameConfig& cfg, int beta_count) {
  if (beta_count < 1) throw Error(Errc::InvalidArgument, "beta_count must be positive");
  const double lo = beta_star_closed_form(cfg);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(beta_count));
  for (int k = 1; k <= beta_count; ++k) {
    out.push_back(k == beta_count ? cfg.a_max : lo + (cfg.a_max - lo) * k / beta_count);
  }
  return out;
}

ResidualDominanceReport check_residual_dominance(const GameConfig& cfg,
                                                 std::span<const double> beta_grid) {
  ResidualDominanceReport r;
  r.config = cfg;
  r.beta_star = beta_star_closed_form(cfg);
  const auto f = equilibrium_distribution(cfg);
  auto residual = [&](double b) { return br_residual(b, f); };

  std::vector<double> judged;
  r.min_residual = std::numeric_limits<double>::infinity();
  for (double b : beta_grid) {
    ResidualPoint p{b, residual(b), !(b > r.beta_star) || b > cfg.a_max};
    if (!p.reference) {
      judged.push_back(b);
      r.min_residual = std::min(r.min_residual, p.residual);
    }
    r.points.push_back(p);
  }
  r.residuals_positive = !judged.empty() && r.min_residual > 0.0;

  std::sort(judged.begin(), judged.end());
  r.min_slope = std::numeric_limits<double>::infinity();
  const double h = kFiniteDifferenceStep;
  for (double b : judged) {
    if (!(b < cfg.a_max)) continue;
    double slope = 0.0;
    if (b + h <= cfg.a_max) {
      slope = (residual(b + h) - residual(b)) / h;
    } else {
      slope = (residual(b) - residual(b - h)) / h;
    }
    r.min_slope = std::min(r.min_slope, slope);
  }
  for (std::size_t i = 0; i + 1 < judged.size(); ++i) {
    const double b0 = judged[i];
    const double b1 = judged[i + 1];
    if (!(b1 > b0)) continue;
    r.min_slope = std::min(r.min_slope, (residual(b1) - residual(b0)) / (b1 - b0));
  }
  r.slope_ok = std::isfinite(r.min_slope) && r.min_slope > r.slope_floor;
  return r;
}

std::vector<ExtremalGReport> check_extremal_g(const GameConfig& cfg, std::span<const double> betas,
                                              const SearchGrid& grid, unsigned threads) {
  for (double b : betas) {
    if (!(b >= 0.0 && b <= cfg.a_max)) {
      throw Error(Errc::InvalidArgument, "beta " + fmt(b) + " outside [0, a_max]");
    }
  }
  const Enumerator e(make_lattice(cfg, grid));
  const auto f_star = equilibrium_distribution(cfg);
  std::vector<double> g_star;
  for (double b : betas) g_star.push_back(g_ratio(b, f_star));

  using Reports = std::vector<ExtremalGReport>;
  auto fresh = [&] {
    Reports out(betas.size());
    for (std::size_t k = 0; k < betas.size(); ++k) {
      out[k].beta = betas[k];
      out[k].g_equilibrium = g_star[k];
      out[k].max_g = -std::numeric_limits<double>::infinity();
    }
    return out;
  };
  std::vector<Reports> partial(e.task_count());
  parallel_for(partial.size(), resolve_workers(threads), [&](std::size_t t) {
    Reports acc = fresh();
    e.run(t, [&](std::span<const Atom> atoms) {
      const auto dist = JamDistribution::create(std::vector<Atom>(atoms.begin(), atoms.end()));
      for (std::size_t k = 0; k < acc.size(); ++k) {
        auto& rep = acc[k];
        ++rep.candidates;
        if (!(clipped_moment(dist, rep.beta, 1) > 0.0)) {
          ++rep.undefined;
          continue;
        }
        const double g = g_ratio(rep.beta, dist);
        if (g > rep.g_equilibrium + kExtremalSlack) ++rep.violations;
        if (g > rep.max_g) {
          rep.max_g = g;
          rep.argmax.assign(atoms.begin(), atoms.end());
        }
      }
    });
    partial[t] = std::move(acc);
  });

  Reports total = fresh();
  for (auto& p : partial) {
    for (std::size_t k = 0; k < total.size(); ++k) {
      auto& dst = total[k];
      auto& src = p[k];
      dst.candidates += src.candidates;
      dst.undefined += src.undefined;
      dst.violations += src.violations;
      if (src.max_g > dst.max_g) {
        dst.max_g = src.max_g;
        dst.argmax = std::move(src.argmax);
      }
    }
  }
  return total;
}

ExtremalGReport check_extremal_g(const GameConfig& cfg, double beta, const SearchGrid& grid,
                                 unsigned threads) {
  const double betas[] = {beta};
  return check_extremal_g(cfg, std::span<const double>(betas), grid, threads).front();
}

UniquenessReport uniqueness_probe(const GameConfig& cfg, const SearchGrid& grid, double tol,
                                  unsigned threads) {
  if (!(tol >= 0.0)) throw Error(Errc::InvalidArgument, "tolerance must be non-negative");
  const Enumerator e(make_lattice(cfg, grid));
  const auto eq = equilibrium(cfg);

  struct Partial {
    std::uint64_t count = 0;
    std::uint64_t near = 0;
    double max_tv = 0.0;
    std::vector<NearOptimalCandidate> listed;
  };
  std::vector<Partial> partial(e.task_count());
  parallel_for(partial.size(), resolve_workers(threads), [&](std::size_t t) {
    Partial& acc = partial[t];
    e.run(t, [&](std::span<const Atom> atoms) {
      ++acc.count;
      Scored s = score(atoms);
      if (std::abs(s.age - eq.age.value) > tol) return;
      ++acc.near;
      const double tv = total_variation(JamDistribution::create(s.atoms), eq.dist);
      acc.max_tv = std::max(acc.max_tv, tv);
      if (acc.listed.size() < kNearOptimalListCap) {
        acc.listed.push_back({std::move(s.atoms), s.age, tv});
      }
    });
  });

  UniquenessReport r;
  r.equilibrium_age = eq.age.value;
  r.tol = tol;
  r.mass_step = grid.mass_step;
  for (auto& p : partial) {
    r.candidates += p.count;
    r.near_optimal_count += p.near;
    r.max_total_variation = std::max(r.max_total_variation, p.max_tv);
    for (auto& c : p.listed) {
      if (r.near_optimal.size() < kNearOptimalListCap) r.near_optimal.push_back(std::move(c));
    }
  }
  return r;
}

}  // namespace jamgame
