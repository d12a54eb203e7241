#pragma once

// Run configuration: one JSON document per run.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kdvflat/pde.hpp"

namespace kdvflat::cli {

enum class Command { null_control, reach, simulate, airy, verify };

std::string to_string(Command c);

/// Fault injection: add delta to coefficient k of g_i in every table `verify` builds.
struct Mutation {
  int i = 1;
  int k = 5;
  double delta = 1e-3;
};

struct AiryOptions {
  double t = 1.0 / 3.0;      ///< time of the sampled window
  double x_lo = -1.5;
  double x_hi = 1.5;
  int n_x = 61;
  double L = 1.0;            ///< bump support half-width for the line solution
  int p_max = 30;            ///< highest spatial derivative in the growth fit
  double R = 0.9;            ///< radius for the Airy coefficient envelope
};

struct RunConfig {
  Command command = Command::verify;
  double a = 0.0;
  double T = 1.0;
  double tau = 0.5;          ///< defaults to T/2
  double s = 2.0;
  double M = 1.0;
  std::optional<int> N;      ///< default 12 (null-control) or len(b) + 4 (reach)
  int trace_depth = 6;
  std::string target = "x2"; ///< x2, x5, fig1, poly(c0,...,cn) or a coefficient list
  std::vector<double> target_coeffs;  ///< resolved power series of the target
  std::optional<int> target_terms;    ///< highest n for b_n
  std::string y0 = "sin_pi"; ///< sin_pi, zero, random_smooth, file
  std::string y0_file;
  Discretization disc;
  std::uint64_t seed = 1;
  std::optional<Mutation> mutate_g;
  double tol_steer = 1e-2;   ///< null-control bound on |y(T)| / |y0|
  double tol_reach = 1e-3;   ///< reach bound on max |y(T) - y1|
  int lemma_count = 1000;
  int snapshots = 11;        ///< time rows in state_snapshots.csv
  AiryOptions airy;

  nlohmann::json source;     ///< the document as read
};

/// Parses and validates a configuration. Unknown keys and violated preconditions throw
/// kdvflat::Error with ErrorCode::config.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

/// Power series of a named or literal target.
std::vector<double> resolve_target(const std::string& name, int fig1_terms = 6);

}  // namespace kdvflat::cli
