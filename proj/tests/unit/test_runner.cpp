#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iterator>

#include "runner.hpp"

using namespace wmlab::runner;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("wmlab-test-runner-" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

json free_scattering() {
  return json::parse(R"({"suite": "scattering", "grid": {"L": 8, "N": 32}, "checks": ["unitarity"],
                         "potential": {"g": []}, "steps": {"hilbert": 50, "star": 50}})");
}

}  // namespace

TEST(Runner, UnknownKeyIsAConfigErrorNamingTheKey) {
  auto cfg = free_scattering();
  cfg["grid"]["spacing"] = 0.1;
  const auto r = run_scenario(cfg, scratch("unknown"));
  EXPECT_EQ(r.code, kConfigError);
  EXPECT_NE(r.message.find("'grid.spacing'"), std::string::npos) << r.message;
  EXPECT_FALSE(fs::exists(scratch("unknown") / "summary.json"));
}

TEST(Runner, UnknownSuiteAndCheck) {
  EXPECT_EQ(run_scenario(json::parse(R"({"suite": "nope"})")).code, kConfigError);
  auto cfg = free_scattering();
  cfg["checks"] = {"unitarity", "speed"};
  const auto r = run_scenario(cfg, scratch("check"));
  EXPECT_EQ(r.code, kConfigError);
  EXPECT_NE(r.message.find("speed"), std::string::npos);
}

TEST(Runner, TypeErrorsAndRangeChecks) {
  auto cfg = free_scattering();
  cfg["grid"]["N"] = "many";
  EXPECT_EQ(run_scenario(cfg, scratch("type")).code, kConfigError);
  cfg = free_scattering();
  cfg["grid"]["N"] = 33;
  EXPECT_EQ(run_scenario(cfg, scratch("odd")).code, kConfigError);
}

TEST(Runner, UnreadableFileIsAConfigError) {
  EXPECT_EQ(run_scenario_file("/nonexistent/scenario.json").code, kConfigError);
  const fs::path p = scratch("syntax");
  fs::create_directories(p);
  std::ofstream(p / "bad.json") << "{\"suite\": ";
  EXPECT_EQ(run_scenario_file(p / "bad.json").code, kConfigError);
}

TEST(Runner, FreeScatteringHasZeroUnitarityDefect) {
  const fs::path out = scratch("free");
  const auto r = run_scenario(free_scattering(), out);
  ASSERT_EQ(r.code, kPass) << r.message;
  ASSERT_EQ(r.checks.size(), 1u);
  EXPECT_EQ(r.checks[0].measured["hilbert_defect"].get<double>(), 0.0);
  EXPECT_EQ(r.checks[0].measured["star_defect"].get<double>(), 0.0);
  EXPECT_TRUE(fs::exists(out / "summary.json"));
  EXPECT_TRUE(fs::exists(out / "metadata.json"));
  const auto summary = json::parse(slurp(out / "summary.json"));
  EXPECT_TRUE(summary["pass"].get<bool>());
  EXPECT_EQ(summary["config"], free_scattering());
}

TEST(Runner, FailingToleranceGivesExitOne) {
  auto cfg = json::parse(R"({"suite": "covariant", "checks": ["hamilton_equations"],
                             "tolerances": {"hamilton_equations": 1e-30}})");
  EXPECT_EQ(run_scenario(cfg, scratch("fail")).code, kCheckFailed);
}

TEST(Runner, NumericalFailureGivesExitThree) {
  // Far too few steps for the quartic pulse: the step-resolution guard trips.
  auto cfg = free_scattering();
  cfg["potential"] = json::parse(R"({"g": [{"center": 0, "width": 0.5, "peak": 1.0}]})");
  cfg["steps"] = json::parse(R"({"hilbert": 2, "star": 2})");
  const auto r = run_scenario(cfg, scratch("numerics"));
  EXPECT_EQ(r.code, kRuntimeError);
  EXPECT_FALSE(r.message.empty());
}

TEST(Runner, SummaryIsByteStable) {
  const auto cfg = json::parse(R"({"suite": "pv-kernel", "orders": {"g": 1, "j": 2, "degree_bound": 6},
                                   "energies": {"points": 21}})");
  const fs::path a = scratch("stable_a"), b = scratch("stable_b");
  ASSERT_EQ(run_scenario(cfg, a).code, kPass);
  ASSERT_EQ(run_scenario(cfg, b).code, kPass);
  for (const auto* f : {"summary.json", "pv_transform.csv", "series_low_orders.json"})
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
}

TEST(Runner, DeterminismRejectsNesting) {
  const auto cfg = json::parse(R"({"suite": "determinism", "runs": [{"suite": "determinism"}]})");
  EXPECT_EQ(run_scenario(cfg, scratch("nest")).code, kConfigError);
  const auto bad = json::parse(R"({"suite": "determinism", "runs": [{"suite": "covariant", "typo": 1}]})");
  const auto r = run_scenario(bad, scratch("nest2"));
  EXPECT_EQ(r.code, kConfigError);
  EXPECT_NE(r.message.find("typo"), std::string::npos);
}

TEST(Runner, SchemaCoversEverySuite) {
  EXPECT_GE(suites().size(), 9u);
  const std::string all = schema_text();
  for (const auto& s : suites()) EXPECT_NE(all.find("suite " + s.name + ":"), std::string::npos) << s.name;
  EXPECT_NE(schema_text("green").find("ladders.sigmas"), std::string::npos);
  EXPECT_THROW(schema_text("nope"), std::exception);
}
