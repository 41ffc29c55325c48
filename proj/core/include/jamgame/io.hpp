#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "jamgame/adversary_oracle.hpp"
#include "jamgame/experiment.hpp"
#include "jamgame/game_model.hpp"
#include "jamgame/monte_carlo.hpp"
#include "jamgame/response_solver.hpp"

namespace jamgame {

/// Written as "schema" into every top-level JSON document.
inline constexpr const char* kSchemaVersion = "aoi-jamgame/1";
/// Significant digits of CSV numbers.
inline constexpr int kCsvDigits = 12;

// Distribution: {"atoms": [[location, mass], ...], "pieces": [[lo, hi, density], ...]}
// Policy: {"kind": "threshold", "beta": b} | {"kind": "zero_wait"} |
//         {"kind": "tabulated", "knots": [[a, delay], ...]}

nlohmann::json to_json(const JamDistribution& dist);
/// Also accepts any document with a "distribution" member, e.g. equilibrium output.
JamDistribution distribution_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SamplingPolicy& policy);
SamplingPolicy policy_from_json(const nlohmann::json& j);

nlohmann::json to_json(const AgeStats& stats);
nlohmann::json to_json(const FeasibilityReport& report);
nlohmann::json to_json(const VerificationReport& report);
nlohmann::json to_json(const EquilibriumSolution& sol, const VerificationReport& report);
nlohmann::json to_json(const BestResponseResult& result, const JamDistribution& dist);
nlohmann::json to_json(const AttackerSearchResult& result);
nlohmann::json to_json(const ResidualDominanceReport& report);
nlohmann::json to_json(const ExtremalGReport& report);
nlohmann::json to_json(const UniquenessReport& report);
nlohmann::json to_json(std::span<const MixtureSweepRow> rows);

/// Adds the schema field to a top-level document.
nlohmann::json with_schema(nlohmann::json body);

std::string format_number(double v, int digits = kCsvDigits);

std::string sweep_csv(std::span<const MixtureSweepRow> rows);
std::vector<MixtureSweepRow> parse_sweep_csv(std::string_view text);
std::string trace_csv(std::span<const StagePath> stages);

enum class OutputFormat { Csv, Json };

void emit_results(std::span<const MixtureSweepRow> rows, OutputFormat format,
                  const std::filesystem::path& path);
void emit_results(const nlohmann::json& document, const std::filesystem::path& path);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace jamgame
