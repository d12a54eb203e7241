#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path work_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("kdvflat_exe_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_exe(const json& cfg, const fs::path& dir, const std::string& out = "out") {
  std::ofstream(dir / "config.json") << cfg.dump(2);
  const std::string cmd = std::string("\"") + KDVFLAT_EXE + "\" -c \"" + (dir / "config.json").string() + "\" -o \"" +
                          (dir / out).string() + "\" 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json report(const fs::path& dir, const std::string& out = "out") { return json::parse(slurp(dir / out / "report.json")); }

TEST(Executable, NullControlWritesArtifacts) {
  const auto dir = work_dir("null");
  ASSERT_EQ(run_exe({{"command", "null-control"}, {"a", 1.0}}, dir), 0);
  const auto r = report(dir);
  EXPECT_EQ(r.at("schema_version"), 1);
  EXPECT_EQ(r.at("status"), "ok");
  EXPECT_LE(r.at("final_relative_l2").get<double>(), 1e-2);
  for (const char* key : {"tail_bound", "residual", "trace_depth", "config", "checks"}) EXPECT_TRUE(r.contains(key)) << key;
  EXPECT_EQ(slurp(dir / "out" / "u.csv").substr(0, 4), "t,u\n");
  EXPECT_EQ(slurp(dir / "out" / "state_snapshots.csv").substr(0, 6), "t,x,y\n");
}

TEST(Executable, FreePhaseControlIsExactlyZero) {
  const auto dir = work_dir("free_phase");
  ASSERT_EQ(run_exe({{"command", "null-control"}, {"a", 0.0}}, dir), 0);
  std::ifstream in(dir / "out" / "u.csv");
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    if (std::stod(line.substr(0, comma)) <= 0.5) {
      EXPECT_EQ(line.substr(comma + 1), "0");
      ++rows;
    }
  }
  EXPECT_GT(rows, 100);
}

TEST(Executable, ReachWritesTheTargetColumn) {
  const auto dir = work_dir("reach");
  ASSERT_EQ(run_exe({{"command", "reach"}, {"target", "x2"}}, dir), 0);
  EXPECT_EQ(slurp(dir / "out" / "final_state.csv").substr(0, 7), "x,y,y1\n");
  EXPECT_LE(report(dir).at("final_max_error").get<double>(), 1e-3);
}

TEST(Executable, VerifyPassesByDefault) {
  const auto dir = work_dir("verify");
  EXPECT_EQ(run_exe({{"command", "verify"}}, dir), 0);
  const auto r = report(dir);
  EXPECT_EQ(r.at("status"), "ok");
  for (const auto& c : r.at("checks")) EXPECT_TRUE(c.at("pass").get<bool>()) << c.dump();
}

TEST(Executable, MutatedTableFailsVerification) {
  const auto dir = work_dir("mutate");
  EXPECT_EQ(run_exe({{"command", "verify"}, {"mutate_g", {{"i", 1}, {"k", 5}, {"delta", 1e-3}}}}, dir), 3);
  const auto r = report(dir);
  EXPECT_EQ(r.at("status"), "property_failure");
  int failed = 0;
  for (const auto& c : r.at("checks")) failed += c.at("pass").get<bool>() ? 0 : 1;
  EXPECT_GT(failed, 0);
}

TEST(Executable, ConfigViolationExitsWithTwo) {
  const auto dir = work_dir("negative_a");
  EXPECT_EQ(run_exe({{"command", "verify"}, {"a", -1.0}}, dir), 2);
}

TEST(Executable, UnreachableTargetExitsWithTwoAndReports) {
  const auto dir = work_dir("unreachable");
  EXPECT_EQ(run_exe({{"command", "reach"}, {"a", 1.0}, {"target", "x2"}}, dir), 2);
  const auto r = report(dir);
  EXPECT_EQ(r.at("status"), "error");
  EXPECT_EQ(r.at("error").at("kind"), "not_reachable");
}

TEST(Executable, DepthCapExitsWithFive) {
  const auto dir = work_dir("depth");
  EXPECT_EQ(run_exe({{"command", "null-control"}, {"a", 1.0}, {"trace_depth", 41}}, dir), 5);
  EXPECT_EQ(report(dir).at("error").at("kind"), "depth");
}

TEST(Executable, MissingConfigFlagExitsWithTwo) {
  const std::string cmd = std::string("\"") + KDVFLAT_EXE + "\" >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 2);
}

TEST(Executable, RunsAreBitIdentical) {
  const auto dir = work_dir("repro");
  const json cfg = {{"command", "simulate"}, {"y0", "random_smooth"}, {"seed", 17}, {"discretization", {{"n_t", 200}}}};
  ASSERT_EQ(run_exe(cfg, dir, "first"), 0);
  ASSERT_EQ(run_exe(cfg, dir, "second"), 0);
  for (const char* f : {"state_snapshots.csv", "final_state.csv", "norms.csv", "report.json"}) {
    EXPECT_EQ(slurp(dir / "first" / f), slurp(dir / "second" / f)) << f;
  }
  const json other = {{"command", "simulate"}, {"y0", "random_smooth"}, {"seed", 18}, {"discretization", {{"n_t", 200}}}};
  ASSERT_EQ(run_exe(other, dir, "third"), 0);
  EXPECT_NE(slurp(dir / "first" / "final_state.csv"), slurp(dir / "third" / "final_state.csv"));
}

}  // namespace
