#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "calderon/cli/commands.hpp"
#include "calderon/cli/config.hpp"
#include "calderon/numkit/errors.hpp"

using namespace calderon;
using namespace calderon::cli;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "calderon_cli_tests" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

const Check* find_check(const Report& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}

const io::CsvTable& table(const Report& r, const std::string& name) {
  for (const auto& [n, t] : r.tables)
    if (n == name) return t;
  throw std::runtime_error("no table " + name);
}

int run_exe(const std::string& args) {
  const int status = std::system((std::string(CALDERON_EXE) + " " + args + " > /dev/null 2>&1").c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Config, DefaultsRoundTrip) {
  const RunConfig config;
  EXPECT_NO_THROW(config.validate());
  const auto back = config_from_json(to_json(config));
  EXPECT_EQ(to_json(back).dump(), to_json(config).dump());
  EXPECT_EQ(config.basis.cap, 12);
  EXPECT_EQ(config.threads, 1u);
}

TEST(Config, OverridesAndRejections) {
  const auto c = config_from_json(nlohmann::json::parse(R"({"params": {"s": 0.25}, "gamma": {"cap": 6}})"));
  EXPECT_EQ(c.params.s, 0.25);
  EXPECT_EQ(c.gamma.cap, 6);
  EXPECT_EQ(c.gamma.mesh_elements, 256);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"gama": {}})")), ParameterError);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"basis": {"cap": "x"}})")), ParameterError);
  RunConfig bad;
  bad.params.s = 1.5;
  EXPECT_THROW(bad.validate(), ParameterError);
  bad = {};
  bad.hilbert.k_max = 12;
  EXPECT_THROW(bad.validate(), ParameterError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ParameterError);
}

TEST(Commands, BasisCapZeroSingleRow) {
  RunConfig config;
  config.basis.cap = 0;
  const auto reports = run_command("basis", config);
  ASSERT_EQ(reports.size(), 1u);
  const auto& decay = table(reports[0], "decay");
  ASSERT_EQ(decay.rows.size(), 1u);
  EXPECT_EQ(decay.rows[0][0], "0");
  EXPECT_EQ(decay.rows[0][1], "0");
  EXPECT_EQ(decay.rows[0][2], "0");
  EXPECT_TRUE(reports[0].passed());
}

TEST(Commands, BasisDefaultUnderBound) {
  const auto r = run_command("basis", RunConfig{})[0];
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(table(r, "decay").rows.size(), poisson::triangle_indices(1, 12).size());
}

TEST(Commands, InvalidOrderIsParameterError) {
  RunConfig config;
  config.params.s = 1.5;
  EXPECT_THROW(run_command("basis", config), ParameterError);
  EXPECT_THROW(run_command("nonsense", RunConfig{}), ParameterError);
}

TEST(Commands, HilbertSigmaSlopeNegative) {
  const auto r = run_command("hilbert", RunConfig{})[0];
  EXPECT_TRUE(r.passed());
  EXPECT_LT(r.results["sigma_slope"].get<double>(), 0.0);
  EXPECT_GE(table(r, "sigma").rows.size(), 9u);
}

TEST(Commands, InstabilityPairReport) {
  const auto r = run_command("instability", RunConfig{})[0];
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.results["bits"].get<int>(), 3);
  EXPECT_EQ(r.results["cardinality"].get<double>(), 8.0);
  EXPECT_NE(r.results["mask1"], r.results["mask2"]);
}

TEST(Commands, HadamardClassicalLimit) {
  RunConfig config;
  config.hadamard.orders = {0.5};
  const auto r = run_command("hadamard", config)[0];
  const auto* check = find_check(r, "classical_limit");
  ASSERT_NE(check, nullptr);
  EXPECT_TRUE(check->passed);
  EXPECT_TRUE(r.passed());
}

// Tables depend only on the config, not on the thread count or the run.
TEST(Commands, DeterministicAcrossThreads) {
  RunConfig config;
  config.gamma.cap = 6;
  config.gamma.mesh_elements = 64;
  config.gamma.random_matrices = 10;
  const auto a = run_command("gamma", config)[0];
  config.threads = 3;
  const auto b = run_command("gamma", config)[0];
  ASSERT_EQ(a.tables.size(), b.tables.size());
  for (std::size_t i = 0; i < a.tables.size(); ++i) EXPECT_EQ(a.tables[i].second.rows, b.tables[i].second.rows);
  EXPECT_EQ(a.results.dump(), b.results.dump());
}

TEST(Commands, ReportConfigReproducesTables) {
  RunConfig config;
  config.hilbert.orders = {0.5};
  config.out = scratch_dir("first").string();
  auto first = run_command("hilbert", config)[0];
  first.write(config.out);
  const auto doc = nlohmann::json::parse(slurp(std::filesystem::path(config.out) / "hilbert.json"));
  EXPECT_EQ(doc["schema_version"].get<int>(), io::kSchemaVersion);
  auto again = config_from_json(doc["config"]);
  again.out = scratch_dir("second").string();
  run_command("hilbert", again)[0].write(again.out);
  for (const auto& name : {"hilbert_sigma.csv", "hilbert_control.csv", "hilbert_identity.csv"})
    EXPECT_EQ(slurp(std::filesystem::path(config.out) / name), slurp(std::filesystem::path(again.out) / name)) << name;
}

TEST(Executable, ExitCodes) {
  const auto dir = scratch_dir("exe");
  EXPECT_EQ(run_exe("--out " + dir.string() + " --s 1.5 basis"), 2);
  EXPECT_EQ(run_exe("--out " + dir.string() + " hadamard"), 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "hadamard.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "hadamard_convergence.csv"));
  EXPECT_EQ(run_exe("no-such-command"), 2);
  std::ofstream(dir / "bad.json") << R"({"hilbert": {"target_nodes": 8}})";
  EXPECT_EQ(run_exe("--config " + (dir / "bad.json").string() + " hilbert"), 2);
  // a failing check gives exit code 1: an unattainable hadamard growth window
  std::ofstream(dir / "strict.json") << R"({"hadamard": {"orders": [0.5], "y0": 1.0, "n_min": 1, "n_max": 3}})";
  EXPECT_EQ(run_exe("--config " + (dir / "strict.json").string() + " --out " + dir.string() + " hadamard"), 1);
}
