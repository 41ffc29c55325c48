#include "jamgame/game_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "jamgame/error.hpp"

namespace jamgame {

namespace {

std::string describe(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw Error(Errc::NonFinite, std::string(what) + " is not finite");
  }
}

// Splits overlapping pieces at every endpoint and sums the densities.
std::vector<Piece> merge_overlapping(std::vector<Piece> pieces) {
  std::vector<double> cuts;
  cuts.reserve(pieces.size() * 2);
  for (const auto& p : pieces) {
    cuts.push_back(p.lo);
    cuts.push_back(p.hi);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Piece> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    double density = 0.0;
    for (const auto& p : pieces) {
      if (p.lo <= lo && hi <= p.hi) density += p.density;
    }
    if (density > 0.0) out.push_back({lo, hi, density});
  }
  return out;
}

}  // namespace

GameConfig validate_config(double a_max, double a_avg) {
  require_finite(a_max, "a_max");
  require_finite(a_avg, "a_avg");
  if (a_max <= 0.0) {
    throw Error(Errc::InvalidArgument, "a_max must be positive, got " + describe(a_max));
  }
  if (a_avg <= 0.0) {
    throw Error(Errc::DegenerateBudget,
                "a_avg must be positive (no jamming budget leaves a zero-length stage), got " +
                    describe(a_avg));
  }
  if (a_avg > a_max) {
    throw Error(Errc::InfeasibleMean,
                "a_avg " + describe(a_avg) + " exceeds a_max " + describe(a_max));
  }
  return GameConfig{a_max, a_avg};
}

JamDistribution JamDistribution::create(std::vector<Atom> atoms, std::vector<Piece> pieces) {
  for (const auto& atom : atoms) {
    require_finite(atom.location, "atom location");
    require_finite(atom.mass, "atom mass");
    if (atom.location < 0.0) {
      throw Error(Errc::InvalidDistribution, "atom location " + describe(atom.location) + " < 0");
    }
    if (atom.mass < 0.0) {
      throw Error(Errc::InvalidDistribution, "negative atom mass " + describe(atom.mass));
    }
  }
  for (const auto& piece : pieces) {
    require_finite(piece.lo, "piece lo");
    require_finite(piece.hi, "piece hi");
    require_finite(piece.density, "piece density");
    if (piece.lo < 0.0 || !(piece.lo < piece.hi)) {
      throw Error(Errc::InvalidDistribution,
                  "piece [" + describe(piece.lo) + ", " + describe(piece.hi) + ") is empty or negative");
    }
    if (piece.density < 0.0) {
      throw Error(Errc::InvalidDistribution, "negative density " + describe(piece.density));
    }
  }

  std::erase_if(atoms, [](const Atom& a) { return a.mass == 0.0; });
  std::erase_if(pieces, [](const Piece& p) { return p.density == 0.0; });

  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& l, const Atom& r) { return l.location < r.location; });
  std::vector<Atom> merged;
  merged.reserve(atoms.size());
  for (const auto& atom : atoms) {
    if (!merged.empty() && atom.location - merged.back().location <= kAtomMergeTolerance) {
      merged.back().mass += atom.mass;
    } else {
      merged.push_back(atom);
    }
  }

  std::sort(pieces.begin(), pieces.end(), [](const Piece& l, const Piece& r) { return l.lo < r.lo; });
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    if (pieces[i].lo < pieces[i - 1].hi) {
      throw Error(Errc::InvalidDistribution, "pieces overlap at " + describe(pieces[i].lo));
    }
  }

  double total = 0.0;
  for (const auto& atom : merged) total += atom.mass;
  for (const auto& piece : pieces) total += piece.density * (piece.hi - piece.lo);
  if (!(std::abs(total - 1.0) <= kNormalizeWindow)) {
    throw Error(Errc::InvalidDistribution, "total probability " + describe(total) + " is not 1");
  }
  if (total != 1.0) {
    for (auto& atom : merged) atom.mass /= total;
    for (auto& piece : pieces) piece.density /= total;
  }

  JamDistribution dist;
  dist.atoms_ = std::move(merged);
  dist.pieces_ = std::move(pieces);
  dist.build_table();
  return dist;
}

JamDistribution JamDistribution::point_mass(double location) {
  return create({{location, 1.0}});
}

JamDistribution JamDistribution::uniform(double lo, double hi) {
  require_finite(lo, "lo");
  require_finite(hi, "hi");
  if (!(lo < hi)) throw Error(Errc::InvalidDistribution, "uniform needs lo < hi");
  return create({}, {{lo, hi, 1.0 / (hi - lo)}});
}

void JamDistribution::build_table() {
  std::vector<double> xs;
  for (const auto& atom : atoms_) xs.push_back(atom.location);
  for (const auto& piece : pieces_) {
    xs.push_back(piece.lo);
    xs.push_back(piece.hi);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  knots_.clear();
  knots_.reserve(xs.size());
  double running = 0.0;
  std::size_t atom_idx = 0;
  std::size_t piece_idx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    double jump = 0.0;
    while (atom_idx < atoms_.size() && atoms_[atom_idx].location == x) {
      jump += atoms_[atom_idx].mass;
      ++atom_idx;
    }
    while (piece_idx < pieces_.size() && pieces_[piece_idx].hi <= x) ++piece_idx;
    double density = 0.0;
    if (piece_idx < pieces_.size() && pieces_[piece_idx].lo <= x && i + 1 < xs.size()) {
      density = pieces_[piece_idx].density;
    }
    knots_.push_back({x, running, jump, density});
    running += jump;
    if (i + 1 < xs.size()) running += density * (xs[i + 1] - x);
  }

  total_mass_ = running;
  support_min_ = xs.front();
  support_max_ = xs.back();
}

double JamDistribution::cdf(double a) const {
  if (a < support_min_) return 0.0;
  if (a >= support_max_) return 1.0;
  auto it = std::upper_bound(knots_.begin(), knots_.end(), a,
                             [](double v, const Knot& k) { return v < k.x; });
  const Knot& k = *std::prev(it);
  return std::min(1.0, k.below + k.jump + k.density_after * (a - k.x));
}

double JamDistribution::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(Errc::ProbabilityRange, "quantile level " + describe(p) + " outside [0, 1]");
  }
  if (p == 0.0) return support_min_;
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    const Knot& k = knots_[i];
    const double at = k.below + k.jump;
    if (p <= at) return k.x;
    if (k.density_after > 0.0 && i + 1 < knots_.size()) {
      const double next = knots_[i + 1].below;
      if (p <= next) {
        return std::min(k.x + (p - at) / k.density_after, knots_[i + 1].x);
      }
    }
  }
  // Only reachable through rounding dust in the last cumulative sum.
  return support_max_;
}

double mean(const JamDistribution& dist) {
  double m = 0.0;
  for (const auto& atom : dist.atoms()) m += atom.location * atom.mass;
  for (const auto& piece : dist.pieces()) {
    m += piece.density * (piece.hi * piece.hi - piece.lo * piece.lo) / 2.0;
  }
  return m;
}

FeasibilityReport check_feasibility(const JamDistribution& dist, const GameConfig& cfg) {
  FeasibilityReport r;
  r.mean = mean(dist);
  r.support_min = dist.support_min();
  r.support_max = dist.support_max();
  double total = 0.0;
  for (const auto& atom : dist.atoms()) total += atom.mass;
  for (const auto& piece : dist.pieces()) total += piece.density * (piece.hi - piece.lo);
  r.total_mass = total;

  r.mean_ok = r.mean <= cfg.a_avg + kMassTolerance;
  r.support_ok = r.support_min >= 0.0 && r.support_max <= cfg.a_max + kMassTolerance;
  r.mass_ok = std::abs(total - 1.0) <= kMassTolerance;

  if (!r.mean_ok) {
    r.violations.push_back("mean " + describe(r.mean) + " exceeds a_avg " + describe(cfg.a_avg));
  }
  if (!r.support_ok) {
    r.violations.push_back("support [" + describe(r.support_min) + ", " + describe(r.support_max) +
                           "] not inside [0, " + describe(cfg.a_max) + "]");
  }
  if (!r.mass_ok) r.violations.push_back("total mass " + describe(total) + " is not 1");
  return r;
}

JamDistribution mix(std::span<const MixtureComponent> components) {
  if (components.empty()) throw Error(Errc::WeightSum, "mixture has no components");
  double weight_sum = 0.0;
  for (const auto& c : components) {
    require_finite(c.weight, "mixture weight");
    if (c.weight < 0.0) throw Error(Errc::WeightSum, "negative mixture weight " + describe(c.weight));
    weight_sum += c.weight;
  }
  if (!(std::abs(weight_sum - 1.0) <= kMassTolerance)) {
    throw Error(Errc::WeightSum, "mixture weights sum to " + describe(weight_sum));
  }

  std::vector<Atom> atoms;
  std::vector<Piece> pieces;
  for (const auto& c : components) {
    if (c.weight == 0.0) continue;
    for (const auto& atom : c.dist.atoms()) atoms.push_back({atom.location, atom.mass * c.weight});
    for (const auto& piece : c.dist.pieces()) {
      pieces.push_back({piece.lo, piece.hi, piece.density * c.weight});
    }
  }
  return JamDistribution::create(std::move(atoms), merge_overlapping(std::move(pieces)));
}

SamplingPolicy SamplingPolicy::threshold(double beta) {
  require_finite(beta, "threshold beta");
  if (beta < 0.0) throw Error(Errc::InvalidPolicy, "threshold beta " + describe(beta) + " < 0");
  return SamplingPolicy(Threshold{beta});
}

SamplingPolicy SamplingPolicy::zero_wait() { return SamplingPolicy(ZeroWait{}); }

SamplingPolicy SamplingPolicy::tabulated(std::vector<TabulatedKnot> knots) {
  if (knots.empty()) throw Error(Errc::InvalidPolicy, "tabulated policy needs at least one knot");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    require_finite(knots[i].a, "knot a");
    require_finite(knots[i].delay, "knot delay");
    if (knots[i].delay < 0.0) {
      throw Error(Errc::InvalidPolicy, "negative delay at a = " + describe(knots[i].a));
    }
    if (i > 0 && !(knots[i - 1].a < knots[i].a)) {
      throw Error(Errc::InvalidPolicy, "knots must be strictly increasing in a");
    }
  }
  return SamplingPolicy(Tabulated{std::move(knots)});
}

std::string SamplingPolicy::kind() const {
  return std::visit(
      [](const auto& r) -> std::string {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Threshold>) return "threshold";
        if constexpr (std::is_same_v<T, ZeroWait>) return "zero_wait";
        return "tabulated";
      },
      rule_);
}

double SamplingPolicy::delay(double a) const {
  return std::visit(
      [a](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Threshold>) {
          return std::max(r.beta - a, 0.0);
        } else if constexpr (std::is_same_v<T, ZeroWait>) {
          return 0.0;
        } else {
          const auto& k = r.knots;
          if (a <= k.front().a) return k.front().delay;
          if (a >= k.back().a) return k.back().delay;
          auto hi = std::upper_bound(k.begin(), k.end(), a,
                                     [](double v, const TabulatedKnot& t) { return v < t.a; });
          auto lo = std::prev(hi);
          const double t = (a - lo->a) / (hi->a - lo->a);
          return lo->delay + t * (hi->delay - lo->delay);
        }
      },
      rule_);
}

double SamplingPolicy::interval(double a) const {
  if (const auto* t = as_threshold()) return std::max(t->beta, a);
  return a + delay(a);
}

std::vector<double> SamplingPolicy::breakpoints() const {
  if (const auto* t = as_threshold()) return {t->beta};
  if (const auto* tab = as_tabulated()) {
    std::vector<double> out;
    out.reserve(tab->knots.size());
    for (const auto& k : tab->knots) out.push_back(k.a);
    return out;
  }
  return {};
}

}  // namespace jamgame
