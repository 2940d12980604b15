#include "lmbs/cli.hpp"
#include "lmbs/config.hpp"
#include "lmbs/error.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace lmbs;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kData = LMBS_TEST_DATA;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("lmbs_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Config, IniAndJsonAreEquivalent) {
  const config::RunConfig a = config::load(kData + "/power_law_075.ini");
  const config::RunConfig b = config::load(kData + "/power_law_075.json");
  EXPECT_EQ(a.snapshot, b.snapshot);
  EXPECT_EQ(a.model.beta, 0.3);
  EXPECT_EQ(a.sim.paths, 200);
  EXPECT_EQ(a.sim.seed, 20240611u);
  EXPECT_EQ(a.deltas, b.deltas);
}

TEST(Config, AutoBalanceAndRecordEvery) {
  const config::RunConfig rc = config::load(kData + "/power_law_075.ini");
  EXPECT_NEAR(total_mass(rc.model.lambda), 1.0 / 0.75, 1e-15);
  EXPECT_EQ(config::resolve_record_every(rc), 100);
}

TEST(Config, UnknownKeysRejected) {
  try {
    (void)config::from_document(config::parse_ini("[model]\nsigma = 1\nbogus = 2\n"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
    EXPECT_NE(e.detail().find("bogus"), std::string::npos);
  }
  EXPECT_THROW((void)config::from_document(config::parse_ini("[nowhere]\nx = 1\n")), Error);
  EXPECT_THROW((void)config::from_document(config::parse_ini("[model]\nsigma = abc\n")), Error);
  EXPECT_THROW((void)config::parse_ini("no section here\n"), Error);
}

TEST(Config, SchemaListsSections) {
  const json& s = config::schema();
  for (const char* sec : {"model", "kappa", "lambda", "numerics", "simulation", "analysis", "discrete"})
    EXPECT_TRUE(s.contains(sec)) << sec;
}

TEST(Cli, ValidateWritesResultAndManifest) {
  const fs::path out = scratch("validate");
  EXPECT_EQ(cli::run({"lmbs", "validate", "--config", kData + "/power_law_075.ini", "--out", out.string()}),
            cli::kExitOk);
  const json v = read_json(out / "validate.json");
  EXPECT_TRUE(v["balanced"].get<bool>());
  EXPECT_TRUE(v["stationary"].get<bool>());
  EXPECT_NEAR(v["margin"].get<double>(), 0.32, 1e-5);
  EXPECT_EQ(v["memory"], "long");
  const json m = read_json(out / "validate.manifest.json");
  EXPECT_EQ(m["version"], cli::kVersion);
  EXPECT_TRUE(m.contains("config"));
  EXPECT_TRUE(m.contains("outputs"));
}

TEST(Cli, ExitCodes) {
  const fs::path out = scratch("codes");
  const std::string o = out.string();
  EXPECT_EQ(cli::run({"lmbs", "validate", "--config", kData + "/unbalanced.ini", "--out", o}), cli::kExitConfig);
  EXPECT_EQ(cli::run({"lmbs", "validate", "--config", kData + "/power_law_04.ini", "--out", o}), cli::kExitOk);
  EXPECT_EQ(cli::run({"lmbs", "gamma", "--config", kData + "/power_law_04.ini", "--out", o}),
            cli::kExitPrecondition);
  EXPECT_EQ(cli::run({"lmbs", "validate", "--out", o}), cli::kExitConfig);
  EXPECT_EQ(cli::run({"lmbs", "validate", "--config", kData + "/missing.ini", "--out", o}), cli::kExitConfig);
  EXPECT_EQ(cli::run({"lmbs", "validate", "--config", kData + "/power_law_075.ini", "--format", "xml"}),
            cli::kExitConfig);
  EXPECT_EQ(cli::run({"lmbs", "frobnicate"}), cli::kExitConfig);
}

TEST(Cli, SolveCsvHasFullPrecision) {
  const fs::path out = scratch("solve");
  ASSERT_EQ(cli::run({"lmbs", "solve", "--config", kData + "/power_law_075.ini", "--out", out.string(), "--horizon",
                      "10", "--step", "0.1"}),
            cli::kExitOk);
  const std::string csv = slurp(out / "moments.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,EV2,resolvent");
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  EXPECT_EQ(rows, 101);
  EXPECT_TRUE(fs::exists(out / "solve.manifest.json"));
}

TEST(Cli, JsonFormat) {
  const fs::path out = scratch("json");
  ASSERT_EQ(cli::run({"lmbs", "analyze", "--config", kData + "/step_kernel.ini", "--out", out.string(), "--format",
                      "json"}),
            cli::kExitOk);
  EXPECT_TRUE(fs::exists(out / "kernel.json"));
  const json a = read_json(out / "analyze.json");
  EXPECT_EQ(a["l2_sq"]["verdict"], "finite");
}

TEST(Cli, DiscreteRuns) {
  const fs::path out = scratch("discrete");
  EXPECT_EQ(cli::run({"lmbs", "discrete", "--config", kData + "/power_law_075.ini", "--out", out.string(), "--paths",
                      "20"}),
            cli::kExitOk);
  EXPECT_TRUE(fs::exists(out / "discrete.json"));
  EXPECT_TRUE(fs::exists(out / "discrete.manifest.json"));
}
