#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>

#include "jamgame/adversary_oracle.hpp"
#include "jamgame/error.hpp"
#include "jamgame/experiment.hpp"
#include "jamgame/io.hpp"
#include "jamgame/monte_carlo.hpp"
#include "jamgame/response_solver.hpp"

namespace jamgame::cli {

namespace {

using nlohmann::json;

// Thrown when a verification step of a command fails.
struct VerificationFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const json& doc, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << doc.dump(2) << '\n';
  } else {
    emit_results(doc, out_path);
  }
}

SamplingPolicy load_policy(const std::string& choice, const JamDistribution& dist) {
  if (choice == "br") return best_response(dist);
  if (choice == "zero-wait" || choice == "zero_wait") return SamplingPolicy::zero_wait();
  return policy_from_json(read_json_file(choice));
}

struct ConfigFlags {
  double a_max = 0.0;
  double a_avg = 0.0;

  void add(CLI::App& cmd, bool required) {
    auto* m = cmd.add_option("--a-max", a_max, "Maximum jamming time");
    auto* a = cmd.add_option("--a-avg", a_avg, "Average jamming budget");
    if (required) {
      m->required();
      a->required();
    } else {
      // Mixture-sweep default instance.
      a_max = 4.0;
      a_avg = 1.0;
      m->capture_default_str();
      a->capture_default_str();
    }
  }

  GameConfig config() const { return validate_config(a_max, a_avg); }
};

std::string oracle_text_line(const std::string& name, bool ok) {
  return (ok ? "PASS " : "FAIL ") + name;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stationary equilibrium of the dynamic age-of-information jamming game", "aoi-jamgame"};
  app.require_subcommand(1);

  // equilibrium
  auto* eq_cmd = app.add_subcommand("equilibrium", "Closed-form equilibrium with verification");
  ConfigFlags eq_cfg;
  eq_cfg.add(*eq_cmd, true);
  bool eq_json = false;
  std::string eq_out;
  eq_cmd->add_flag("--json", eq_json, "Print JSON instead of a summary");
  eq_cmd->add_option("--out", eq_out, "Write the JSON document to this path");

  // best-response
  auto* br_cmd = app.add_subcommand("best-response", "Water-filling best response to a jamming law");
  std::string br_dist;
  double br_tol = 1e-10;
  std::string br_out;
  br_cmd->add_option("--dist", br_dist, "Distribution JSON file")->required();
  br_cmd->add_option("--tol", br_tol, "Residual tolerance")->capture_default_str();
  br_cmd->add_option("--out", br_out, "Write the JSON document to this path");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo sample-path simulation");
  std::string sim_dist;
  std::string sim_policy;
  std::uint64_t sim_stages = 0;
  std::uint64_t sim_seed = 0;
  std::string sim_trace;
  std::string sim_out;
  sim_cmd->add_option("--dist", sim_dist, "Distribution JSON file")->required();
  sim_cmd->add_option("--policy", sim_policy, "Policy JSON file, 'br' or 'zero-wait'")->required();
  sim_cmd->add_option("--stages", sim_stages, "Number of stages")->required();
  sim_cmd->add_option("--seed", sim_seed, "Generator seed")->required();
  sim_cmd->add_option("--trace", sim_trace, "Also write a per-stage CSV trace");
  sim_cmd->add_option("--out", sim_out, "Write the JSON document to this path");

  // oracle
  auto* or_cmd = app.add_subcommand("oracle", "Brute-force checks of the attacker side");
  ConfigFlags or_cfg;
  or_cfg.add(*or_cmd, true);
  std::string or_profile = "ci";
  std::string or_out;
  or_cmd->add_option("--profile", or_profile, "Grid profile")
      ->check(CLI::IsMember({"ci", "deep"}))
      ->capture_default_str();
  or_cmd->add_option("--out", or_out, "Write the JSON report to this path");

  // sweep
  auto* sw_cmd = app.add_subcommand("sweep", "Mixture sweep from delta(a_avg) to the equilibrium law");
  ConfigFlags sw_cfg;
  sw_cfg.add(*sw_cmd, false);
  std::string sw_alphas = "0:0.1:1";
  std::vector<std::uint64_t> sw_sim;
  std::string sw_out;
  std::string sw_format = "csv";
  sw_cmd->add_option("--alphas", sw_alphas, "start:step:stop or a comma list")->capture_default_str();
  sw_cmd->add_option("--simulate", sw_sim, "Append Monte Carlo ages: STAGES SEED")->expected(2);
  sw_cmd->add_option("--out", sw_out, "Output path (stdout when omitted)");
  sw_cmd->add_option("--format", sw_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  std::vector<const char*> argv{"aoi-jamgame"};
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (eq_cmd->parsed()) {
      const auto sol = equilibrium(eq_cfg.config());
      const auto report = verify_equilibrium(sol);
      const auto doc = with_schema(to_json(sol, report));
      if (!eq_out.empty()) emit_results(doc, eq_out);
      if (eq_json) {
        out << doc.dump(2) << '\n';
      } else {
        out << "a_max " << format_number(sol.config.a_max) << ", a_avg " << format_number(sol.config.a_avg)
            << '\n';
        out << "equilibrium law:";
        for (const auto& a : sol.dist.atoms()) {
          out << " (" << format_number(a.location) << ", " << format_number(a.mass) << ")";
        }
        out << "\nbeta* " << format_number(sol.beta_star, 10) << "\naverage age "
            << format_number(sol.age.value, 10) << '\n';
        for (const auto& c : report.checks) out << oracle_text_line(c.name, c.passed) << '\n';
      }
      if (!report.passed()) throw VerificationFailed("equilibrium verification failed");
    } else if (br_cmd->parsed()) {
      const auto dist = distribution_from_json(read_json_file(br_dist));
      BestResponseOptions options;
      options.tol = br_tol;
      const auto result = solve_best_response(dist, options);
      emit(with_schema(to_json(result, dist)), br_out, out);
    } else if (sim_cmd->parsed()) {
      const auto dist = distribution_from_json(read_json_file(sim_dist));
      const auto policy = load_policy(sim_policy, dist);
      if (!sim_trace.empty()) {
        write_text_file(sim_trace, trace_csv(trace(dist, policy, sim_stages, sim_seed)));
      }
      const auto stats = simulate(dist, policy, sim_stages, sim_seed);
      json doc{{"seed", sim_seed}, {"policy", to_json(policy)}, {"stats", to_json(stats)}};
      doc["age_estimate"] = stats.age_estimate;
      emit(with_schema(doc), sim_out, out);
    } else if (or_cmd->parsed()) {
      const auto cfg = or_cfg.config();
      const bool deep = or_profile == "deep";
      const SearchGrid two_point =
          deep ? deep_grid(cfg, GridFamily::TwoPoint) : ci_grid(cfg, GridFamily::TwoPoint);
      const SearchGrid three_point{cfg.a_max / (deep ? 16.0 : 8.0), deep ? 1.0 / 64.0 : 1.0 / 32.0,
                                   GridFamily::ThreePoint};
      const SearchGrid simplex{cfg.a_max / 4.0, deep ? 1.0 / 128.0 : 1.0 / 64.0, GridFamily::SimplexGrid};

      json searches = json::array();
      bool ok = true;
      for (const auto& grid : {two_point, three_point, simplex}) {
        const auto r = brute_force_attacker(cfg, grid);
        // No candidate may beat the closed form; the two-point family contains it.
        ok = ok && r.gap >= -1e-9;
        if (grid.family == GridFamily::TwoPoint) ok = ok && r.gap <= 1e-6;
        searches.push_back(to_json(r));
      }
      const auto dominance = check_residual_dominance(cfg, residual_check_grid(cfg));
      const double beta_star = beta_star_closed_form(cfg);
      const std::vector<double> betas{0.0, cfg.a_max / 8.0, cfg.a_max / 4.0, beta_star, cfg.a_max / 2.0,
                                      cfg.a_max};
      const auto extremal = check_extremal_g(cfg, betas, simplex);
      const auto uniqueness = uniqueness_probe(cfg, simplex, 1e-6);
      json extremal_json = json::array();
      bool extremal_ok = true;
      for (const auto& e : extremal) {
        extremal_ok = extremal_ok && e.passed();
        extremal_json.push_back(to_json(e));
      }
      ok = ok && dominance.passed() && extremal_ok && uniqueness.unique();
      json doc{{"config", {{"a_max", cfg.a_max}, {"a_avg", cfg.a_avg}}},
               {"profile", or_profile},
               {"equilibrium_age", beta_star},
               {"searches", searches},
               {"residual_dominance", to_json(dominance)},
               {"extremal_g", extremal_json},
               {"uniqueness", to_json(uniqueness)},
               {"passed", ok}};
      emit(with_schema(doc), or_out, out);
      if (!ok) throw VerificationFailed("oracle checks failed");
    } else if (sw_cmd->parsed()) {
      const auto cfg = sw_cfg.config();
      const auto alphas = parse_alphas(sw_alphas);
      std::optional<SweepSimulation> sim;
      if (!sw_sim.empty()) sim = SweepSimulation{sw_sim[0], sw_sim[1]};
      const auto rows = sweep_mixture(cfg, alphas, sim);
      const auto format = sw_format == "json" ? OutputFormat::Json : OutputFormat::Csv;
      if (sw_out.empty()) {
        out << (format == OutputFormat::Csv ? sweep_csv(rows)
                                            : with_schema({{"rows", to_json(rows)}}).dump(2) + "\n");
      } else {
        emit_results(rows, format, sw_out);
      }
    }
  } catch (const VerificationFailed& e) {
    err << "error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.is_internal() ? kExitInternal : kExitValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace jamgame::cli
