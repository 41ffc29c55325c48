#include "jamgame/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "jamgame/error.hpp"

namespace jamgame {

using nlohmann::json;

namespace {

double number_at(const json& arr, std::size_t i, const char* what) {
  if (!arr.is_array() || i >= arr.size() || !arr[i].is_number()) {
    throw Error(Errc::Parse, std::string("expected number for ") + what);
  }
  return arr[i].get<double>();
}

json atoms_json(std::span<const Atom> atoms) {
  json out = json::array();
  for (const auto& a : atoms) out.push_back({a.location, a.mass});
  return out;
}

const char* const kSweepHeader = "alpha,age_equilibrium_policy,age_zero_wait,beta_br,age_simulated";

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    out.push_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

double parse_field(std::string_view s) {
  try {
    std::size_t used = 0;
    const std::string owned(s);
    const double v = std::stod(owned, &used);
    if (used != owned.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw Error(Errc::Parse, "bad CSV number '" + std::string(s) + "'");
  }
}

}  // namespace

json to_json(const JamDistribution& dist) {
  json pieces = json::array();
  for (const auto& p : dist.pieces()) pieces.push_back({p.lo, p.hi, p.density});
  return json{{"atoms", atoms_json(dist.atoms())}, {"pieces", pieces}};
}

JamDistribution distribution_from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::Parse, "distribution must be a JSON object");
  if (j.contains("distribution")) return distribution_from_json(j.at("distribution"));
  if (!j.contains("atoms") && !j.contains("pieces")) {
    throw Error(Errc::Parse, "distribution needs \"atoms\" and/or \"pieces\"");
  }
  std::vector<Atom> atoms;
  std::vector<Piece> pieces;
  if (j.contains("atoms")) {
    if (!j["atoms"].is_array()) throw Error(Errc::Parse, "\"atoms\" must be an array");
    for (const auto& a : j["atoms"]) {
      if (a.size() != 2) throw Error(Errc::Parse, "atom must be [location, mass]");
      atoms.push_back({number_at(a, 0, "atom location"), number_at(a, 1, "atom mass")});
    }
  }
  if (j.contains("pieces")) {
    if (!j["pieces"].is_array()) throw Error(Errc::Parse, "\"pieces\" must be an array");
    for (const auto& p : j["pieces"]) {
      if (p.size() != 3) throw Error(Errc::Parse, "piece must be [lo, hi, density]");
      pieces.push_back({number_at(p, 0, "piece lo"), number_at(p, 1, "piece hi"),
                        number_at(p, 2, "piece density")});
    }
  }
  return JamDistribution::create(std::move(atoms), std::move(pieces));
}

json to_json(const SamplingPolicy& policy) {
  if (const auto* t = policy.as_threshold()) return json{{"kind", "threshold"}, {"beta", t->beta}};
  if (const auto* tab = policy.as_tabulated()) {
    json knots = json::array();
    for (const auto& k : tab->knots) knots.push_back({k.a, k.delay});
    return json{{"kind", "tabulated"}, {"knots", knots}};
  }
  return json{{"kind", "zero_wait"}};
}

SamplingPolicy policy_from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::Parse, "policy must be a JSON object");
  if (j.contains("policy") && !j.contains("kind")) return policy_from_json(j.at("policy"));
  if (!j.contains("kind") || !j["kind"].is_string()) throw Error(Errc::Parse, "policy needs a \"kind\"");
  const auto kind = j["kind"].get<std::string>();
  if (kind == "threshold") {
    if (!j.contains("beta") || !j["beta"].is_number()) throw Error(Errc::Parse, "threshold needs \"beta\"");
    return SamplingPolicy::threshold(j["beta"].get<double>());
  }
  if (kind == "zero_wait") return SamplingPolicy::zero_wait();
  if (kind == "tabulated") {
    if (!j.contains("knots") || !j["knots"].is_array()) throw Error(Errc::Parse, "tabulated needs \"knots\"");
    std::vector<TabulatedKnot> knots;
    for (const auto& k : j["knots"]) {
      if (k.size() != 2) throw Error(Errc::Parse, "knot must be [a, delay]");
      knots.push_back({number_at(k, 0, "knot a"), number_at(k, 1, "knot delay")});
    }
    return SamplingPolicy::tabulated(std::move(knots));
  }
  throw Error(Errc::Parse, "unknown policy kind '" + kind + "'");
}

json to_json(const AgeStats& s) {
  return json{{"stages", s.stages},
              {"total_time", s.total_time},
              {"total_area", s.total_area},
              {"age_estimate", s.age_estimate},
              {"standard_error", s.standard_error()},
              {"min_interval", s.stages > 0 ? s.min_interval : 0.0},
              {"max_interval", s.max_interval}};
}

json to_json(const FeasibilityReport& r) {
  return json{{"feasible", r.feasible()},   {"mean", r.mean},
              {"total_mass", r.total_mass}, {"support", {r.support_min, r.support_max}},
              {"violations", r.violations}};
}

json to_json(const VerificationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"detail", c.detail}});
  }
  return json{{"passed", r.passed()}, {"checks", checks}};
}

json to_json(const EquilibriumSolution& sol, const VerificationReport& report) {
  return json{{"config", {{"a_max", sol.config.a_max}, {"a_avg", sol.config.a_avg}}},
              {"distribution", to_json(sol.dist)},
              {"beta_star", sol.beta_star},
              {"policy", to_json(sol.policy)},
              {"age",
               {{"time_average", sol.age.as(AgeConvention::TimeAverage).value},
                {"stage_ratio", sol.age.as(AgeConvention::StageRatio).value}}},
              {"residuals",
               {{"fixed_point", sol.residuals.fixed_point},
                {"quadratic", sol.residuals.quadratic},
                {"mean_slack", sol.residuals.mean_slack}}},
              {"verification", to_json(report)}};
}

json to_json(const BestResponseResult& r, const JamDistribution& dist) {
  const auto policy = r.policy();
  const auto age = average_age(dist, policy);
  return json{{"beta", r.beta},
              {"policy", to_json(policy)},
              {"residual", r.residual},
              {"iterations", r.iterations},
              {"bracket", {0.0, r.bracket_upper}},
              {"sign_changes", r.sign_changes},
              {"age",
               {{"time_average", age.value}, {"stage_ratio", age.as(AgeConvention::StageRatio).value}}}};
}

json to_json(const AttackerSearchResult& r) {
  return json{{"family", std::string(to_string(r.grid.family))},
              {"support_step", r.grid.support_step},
              {"mass_step", r.grid.mass_step},
              {"candidates", r.candidates},
              {"best", to_json(r.best)},
              {"best_beta", r.best_beta},
              {"best_age", r.best_age},
              {"equilibrium_age", r.equilibrium_age},
              {"gap", r.gap},
              {"total_variation", r.total_variation}};
}

json to_json(const ResidualDominanceReport& r) {
  return json{{"passed", r.passed()},
              {"beta_star", r.beta_star},
              {"grid_points", r.points.size()},
              {"min_residual", r.min_residual},
              {"min_slope", r.min_slope},
              {"slope_floor", r.slope_floor},
              {"residuals_positive", r.residuals_positive},
              {"slope_ok", r.slope_ok}};
}

json to_json(const ExtremalGReport& r) {
  return json{{"passed", r.passed()},
              {"beta", r.beta},
              {"g_equilibrium", r.g_equilibrium},
              {"max_g", r.max_g},
              {"argmax", atoms_json(r.argmax)},
              {"candidates", r.candidates},
              {"undefined", r.undefined},
              {"violations", r.violations}};
}

json to_json(const UniquenessReport& r) {
  json listed = json::array();
  for (const auto& c : r.near_optimal) {
    listed.push_back({{"atoms", atoms_json(c.atoms)}, {"age", c.age}, {"total_variation", c.total_variation}});
  }
  return json{{"unique", r.unique()},
              {"equilibrium_age", r.equilibrium_age},
              {"tol", r.tol},
              {"mass_step", r.mass_step},
              {"candidates", r.candidates},
              {"near_optimal_count", r.near_optimal_count},
              {"max_total_variation", r.max_total_variation},
              {"near_optimal", listed}};
}

json to_json(std::span<const MixtureSweepRow> rows) {
  json out = json::array();
  for (const auto& r : rows) {
    json row{{"alpha", r.alpha},
             {"age_equilibrium_policy", r.age_equilibrium_policy},
             {"age_zero_wait", r.age_zero_wait},
             {"beta_br", r.beta_br}};
    row["age_simulated"] = r.age_simulated ? json(*r.age_simulated) : json(nullptr);
    out.push_back(std::move(row));
  }
  return out;
}

json with_schema(json body) {
  json out{{"schema", kSchemaVersion}};
  out.update(body);
  return out;
}

std::string format_number(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string sweep_csv(std::span<const MixtureSweepRow> rows) {
  std::string out = kSweepHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += format_number(r.alpha) + ',' + format_number(r.age_equilibrium_policy) + ',' +
           format_number(r.age_zero_wait) + ',' + format_number(r.beta_br) + ',';
    if (r.age_simulated) out += format_number(*r.age_simulated);
    out += '\n';
  }
  return out;
}

std::vector<MixtureSweepRow> parse_sweep_csv(std::string_view text) {
  auto lines = split(text, '\n');
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines.front() != kSweepHeader) {
    throw Error(Errc::Parse, "sweep CSV must start with the header: " + std::string(kSweepHeader));
  }
  std::vector<MixtureSweepRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split(lines[i], ',');
    if (fields.size() != 5) {
      throw Error(Errc::Parse, "sweep CSV line " + std::to_string(i + 1) + " needs 5 fields");
    }
    MixtureSweepRow r;
    r.alpha = parse_field(fields[0]);
    r.age_equilibrium_policy = parse_field(fields[1]);
    r.age_zero_wait = parse_field(fields[2]);
    r.beta_br = parse_field(fields[3]);
    if (!fields[4].empty()) r.age_simulated = parse_field(fields[4]);
    rows.push_back(r);
  }
  return rows;
}

std::string trace_csv(std::span<const StagePath> stages) {
  std::string out = "stage,jam,delay,interval,sample_epoch\n";
  for (std::size_t i = 0; i < stages.size(); ++i) {
    const auto& s = stages[i];
    out += std::to_string(i + 1) + ',' + format_number(s.jam) + ',' + format_number(s.delay) + ',' +
           format_number(s.interval) + ',' + format_number(s.sample_epoch) + '\n';
  }
  return out;
}

void emit_results(std::span<const MixtureSweepRow> rows, OutputFormat format,
                  const std::filesystem::path& path) {
  if (format == OutputFormat::Csv) {
    write_text_file(path, sweep_csv(rows));
  } else {
    emit_results(with_schema({{"rows", to_json(rows)}}), path);
  }
}

void emit_results(const json& document, const std::filesystem::path& path) {
  write_text_file(path, document.dump(2) + "\n");
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(Errc::Parse, path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw Error(Errc::Io, "failed writing " + path.string());
}

}  // namespace jamgame
