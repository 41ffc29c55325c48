#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "jamgame/error.hpp"
#include "jamgame/experiment.hpp"
#include "jamgame/io.hpp"
#include "jamgame/response_solver.hpp"

namespace jamgame {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "jamgame_io_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kHeader = "alpha,age_equilibrium_policy,age_zero_wait,beta_br,age_simulated";

TEST(Json, DistributionRoundTrip) {
  const auto d = JamDistribution::create({{0.0, 0.25}, {3.0, 0.25}}, {{1.0, 2.0, 0.5}});
  const auto back = distribution_from_json(to_json(d));
  ASSERT_EQ(back.atoms().size(), 2u);
  ASSERT_EQ(back.pieces().size(), 1u);
  EXPECT_EQ(back.atoms()[1].location, 3.0);
  EXPECT_EQ(back.pieces()[0].density, 0.5);
}

TEST(Json, EquilibriumDocumentReloadsBitExact) {
  const auto sol = equilibrium(validate_config(9.0, 1.0));
  const auto doc = with_schema(to_json(sol, verify_equilibrium(sol)));
  EXPECT_EQ(doc.at("schema"), kSchemaVersion);
  const auto reparsed = nlohmann::json::parse(doc.dump());
  const auto d = distribution_from_json(reparsed);
  ASSERT_EQ(d.atoms().size(), sol.dist.atoms().size());
  for (std::size_t i = 0; i < d.atoms().size(); ++i) {
    EXPECT_EQ(d.atoms()[i].location, sol.dist.atoms()[i].location);
    EXPECT_EQ(d.atoms()[i].mass, sol.dist.atoms()[i].mass);
  }
}

TEST(Json, PolicyRoundTrip) {
  for (const auto& p : {SamplingPolicy::threshold(1.25), SamplingPolicy::zero_wait(),
                        SamplingPolicy::tabulated({{0.0, 1.0}, {2.0, 0.5}})}) {
    const auto back = policy_from_json(to_json(p));
    EXPECT_EQ(back.kind(), p.kind());
    for (double a : {0.0, 0.7, 1.9, 3.0}) EXPECT_EQ(back.delay(a), p.delay(a));
  }
  EXPECT_THROW(policy_from_json(nlohmann::json{{"kind", "random"}}), Error);
  EXPECT_THROW(policy_from_json(nlohmann::json{{"kind", "threshold"}}), Error);
  EXPECT_THROW(distribution_from_json(nlohmann::json::array()), Error);
  EXPECT_THROW(distribution_from_json(nlohmann::json{{"atoms", {{1.0}}}}), Error);
}

TEST(Csv, HeaderAndEmptyOutput) {
  const std::vector<MixtureSweepRow> none;
  EXPECT_EQ(sweep_csv(none), std::string(kHeader) + "\n");
  const auto path = scratch("empty.csv");
  emit_results(none, OutputFormat::Csv, path);
  EXPECT_EQ(slurp(path), std::string(kHeader) + "\n");
  EXPECT_TRUE(parse_sweep_csv(slurp(path)).empty());
}

TEST(Csv, ThreeRowsReingestAtPrintedPrecision) {
  const auto cfg = validate_config(4.0, 1.0);
  const std::vector<double> alphas{0.0, 0.5, 1.0};
  auto rows = sweep_mixture(cfg, alphas, SweepSimulation{1000, 3});
  const auto text = sweep_csv(rows);
  EXPECT_EQ(text.substr(0, text.find('\n')), kHeader);
  const auto back = parse_sweep_csv(text);
  ASSERT_EQ(back.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(format_number(back[i].alpha), format_number(rows[i].alpha));
    EXPECT_EQ(format_number(back[i].beta_br), format_number(rows[i].beta_br));
    EXPECT_EQ(format_number(back[i].age_zero_wait), format_number(rows[i].age_zero_wait));
    ASSERT_TRUE(back[i].age_simulated.has_value());
    EXPECT_EQ(format_number(*back[i].age_simulated), format_number(*rows[i].age_simulated));
  }
  EXPECT_EQ(sweep_csv(back), text);  // fixed point of print -> parse -> print

  for (auto& r : rows) r.age_simulated.reset();
  const auto bare = parse_sweep_csv(sweep_csv(rows));
  for (const auto& r : bare) EXPECT_FALSE(r.age_simulated.has_value());
}

TEST(Csv, RejectsMalformed) {
  EXPECT_THROW(parse_sweep_csv("a,b\n"), Error);
  EXPECT_THROW(parse_sweep_csv(std::string(kHeader) + "\n1,2\n"), Error);
  EXPECT_THROW(parse_sweep_csv(std::string(kHeader) + "\n1,x,3,4,\n"), Error);
}

TEST(Csv, TraceColumns) {
  const std::vector<StagePath> path{{0.2, 0.3, 0.5, 0.5}, {1.0, 0.0, 1.0, 1.5}};
  const auto text = trace_csv(path);
  EXPECT_EQ(text, "stage,jam,delay,interval,sample_epoch\n1,0.2,0.3,0.5,0.5\n2,1,0,1,1.5\n");
}

TEST(Emit, JsonRowsAndErrors) {
  const auto rows = sweep_mixture(validate_config(4.0, 1.0), std::vector<double>{0.0, 1.0});
  const auto path = scratch("rows.json");
  emit_results(rows, OutputFormat::Json, path);
  const auto doc = read_json_file(path);
  EXPECT_EQ(doc.at("schema"), kSchemaVersion);
  ASSERT_EQ(doc.at("rows").size(), 2u);
  EXPECT_TRUE(doc.at("rows")[0].at("age_simulated").is_null());
  EXPECT_THROW(read_json_file(scratch("missing.json")), Error);
  EXPECT_THROW(write_text_file("/nonexistent-dir/x.csv", "x"), Error);
}

}  // namespace
}  // namespace jamgame
