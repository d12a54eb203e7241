#pragma once

// Pipelines behind the CLI commands. Each command writes its artifacts into an
// output directory and returns the report document.

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kdvflat/error.hpp"
#include "kdvflat/flatout.hpp"
#include "kdvflat/synth.hpp"
#include "kdvflat/trajectory.hpp"
#include "kdvflat_cli/config.hpp"

namespace kdvflat::cli {

/// 2: rejected input, 3: a checked property failed, 4: numerical failure (instability,
/// overflow, degenerate fit), 5: a request beyond a certified limit (jet depth,
/// smoothing time, series divergence).
enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_property = 3, exit_numerical = 4, exit_limit = 5 };

int exit_code_for(ErrorCode code) noexcept;

/// Pass/fail items of a report.
class CheckList {
 public:
  /// Records value <= threshold.
  bool at_most(const std::string& name, double value, double threshold);
  /// Records lo <= value <= hi.
  bool within(const std::string& name, double value, double lo, double hi);
  /// Records a boolean outcome.
  bool require(const std::string& name, bool pass, const std::string& detail = {});

  bool all_pass() const noexcept { return all_pass_; }
  const nlohmann::json& items() const noexcept { return items_; }

 private:
  bool add(nlohmann::json item, bool pass);

  nlohmann::json items_ = nlohmann::json::array();
  bool all_pass_ = true;
};

Profile make_profile(const RunConfig& cfg);

struct NullControlRun {
  ControlSignal u;
  Trajectory traj;
  ResidualReport residual;
  Envelope envelope;
  int N = 0;
  double y0_l2 = 0.0;
  double final_l2 = 0.0;
  double spectral_abscissa = 0.0;
  bool free_phase_zero = true;

  double relative_final() const { return y0_l2 > 0.0 ? final_l2 / y0_l2 : final_l2; }
};

/// Free phase, trace-modulated flat output, series control and the controlled solve.
NullControlRun null_control_pipeline(const RunConfig& cfg, const Profile& y0);

struct ReachRun {
  std::vector<double> b;
  ControlSignal u;
  Trajectory traj;
  ResidualReport residual;
  Envelope envelope;
  int N = 0;
  double final_error = 0.0;         ///< solver: max_x |y(x, T) - y1(x)|
  double series_final_error = 0.0;  ///< series: max_x |y_N(x, T) - y1(x)|
  double roundtrip_defect = 0.0;    ///< max coefficient defect of sum b_i g_i - y1
};

ReachRun reach_pipeline(const RunConfig& cfg);

struct Outcome {
  nlohmann::json report;
  int exit_code = exit_ok;
};

Outcome cmd_null_control(const RunConfig& cfg, const std::filesystem::path& out);
Outcome cmd_reach(const RunConfig& cfg, const std::filesystem::path& out);
Outcome cmd_simulate(const RunConfig& cfg, const std::filesystem::path& out);
Outcome cmd_airy(const RunConfig& cfg, const std::filesystem::path& out);
Outcome cmd_verify(const RunConfig& cfg, const std::filesystem::path& out);

/// Runs the configured command and writes report.json, also on failure. verbosity > 0
/// logs progress to stderr.
int run(const RunConfig& cfg, const std::filesystem::path& out, int verbosity = 0);

}  // namespace kdvflat::cli
