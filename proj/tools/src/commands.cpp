#include "kdvflat_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "kdvflat/airy.hpp"
#include "kdvflat/genfun.hpp"
#include "kdvflat/pde.hpp"
#include "kdvflat_cli/artifacts.hpp"

namespace kdvflat::cli {
namespace {

using nlohmann::json;

json envelope_json(const Envelope& env) { return {{"M_env", env.M_env}, {"R_env", env.R_env}, {"s_env", env.s_env}}; }

json residual_json(const ResidualReport& r) {
  return {{"max_defect", r.max_defect},         {"scale", r.scale},
          {"relative", r.relative()},           {"max_bc_defect", r.max_bc_defect},
          {"max_flat_defect", r.max_flat_defect}, {"max_pde_defect", r.max_pde_defect}};
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

json header(const RunConfig& cfg) {
  return {{"schema_version", kReportSchemaVersion}, {"command", to_string(cfg.command)}, {"config", cfg.source}};
}

Outcome finish(json report, const CheckList& checks) {
  report["checks"] = checks.items();
  report["status"] = checks.all_pass() ? "ok" : "property_failure";
  return {std::move(report), checks.all_pass() ? exit_ok : exit_property};
}

}  // namespace

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::config:
    case ErrorCode::invalid_argument:
    case ErrorCode::not_reachable:
    case ErrorCode::not_applicable:
      return exit_config;
    case ErrorCode::depth:
    case ErrorCode::roughness:
    case ErrorCode::divergence_risk:
      return exit_limit;
    default:
      return exit_numerical;
  }
}

bool CheckList::add(json item, bool pass) {
  item["pass"] = pass;
  items_.push_back(std::move(item));
  all_pass_ = all_pass_ && pass;
  return pass;
}

bool CheckList::at_most(const std::string& name, double value, double threshold) {
  return add({{"name", name}, {"value", value}, {"threshold", threshold}}, value <= threshold);
}

bool CheckList::within(const std::string& name, double value, double lo, double hi) {
  return add({{"name", name}, {"value", value}, {"lo", lo}, {"hi", hi}}, value >= lo && value <= hi);
}

bool CheckList::require(const std::string& name, bool pass, const std::string& detail) {
  json item{{"name", name}};
  if (!detail.empty()) item["detail"] = detail;
  return add(std::move(item), pass);
}

Profile make_profile(const RunConfig& cfg) {
  if (cfg.y0 == "zero") return [](double) { return 0.0; };
  if (cfg.y0 == "sin_pi") return [](double x) { return std::sin(std::numbers::pi * x); };
  if (cfg.y0 == "file") return read_profile_csv(cfg.y0_file);
  // random_smooth: sum_k c_k sin(k pi x) / k^2
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::vector<double> c(6);
  for (double& v : c) v = coef(rng);
  return [c](double x) {
    double s = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
      const double kk = static_cast<double>(k + 1);
      s += c[k] * std::sin(kk * std::numbers::pi * x) / (kk * kk);
    }
    return s;
  };
}

NullControlRun null_control_pipeline(const RunConfig& cfg, const Profile& y0) {
  NullControlRun run;
  run.N = cfg.N.value_or(12);
  const double eps = 0.05 * cfg.T;
  const StepParams step{cfg.s, cfg.M, cfg.tau, cfg.T};
  step.validate();

  const ModalTrace trace(y0, cfg.a, cfg.disc, eps);
  run.spectral_abscissa = trace.spectral_abscissa();
  const FlatOutput z = flat_output_null(trace.source(cfg.T, cfg.trace_depth), step, run.N + 1);
  run.envelope = z.envelope();

  const auto table = build_table(cfg.a, run.N);
  const auto times = solver_times(cfg.T, cfg.disc);
  run.u = synthesize_control(table, z, run.N, times);
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] <= cfg.tau && run.u.values[k] != 0.0) run.free_phase_zero = false;
  }
  run.residual = residual_check(table, z, run.N, linspace(-1.0, 0.0, 21), linspace(eps, cfg.T, 41));

  run.traj = solve_controlled(run.u, y0, cfg.a, cfg.T, cfg.disc);
  run.y0_l2 = state_l2(run.traj, 0);
  run.final_l2 = state_l2(run.traj, run.traj.t_grid.size() - 1);
  return run;
}

ReachRun reach_pipeline(const RunConfig& cfg) {
  ReachRun run;
  const auto& y1 = cfg.target_coeffs;
  const int degree = static_cast<int>(y1.size()) - 1;
  const int terms = cfg.target_terms.value_or(std::max(degree, 0));
  run.b = extract_b(y1, cfg.a, terms);
  while (!run.b.empty() && run.b.back() == 0.0) run.b.pop_back();
  run.N = cfg.N.value_or(static_cast<int>(run.b.size()) + 4);
  if (run.N + 1 < static_cast<int>(run.b.size())) {
    fail(ErrorCode::config, "N must be at least len(b) - 1 = " + std::to_string(run.b.size() - 1));
  }

  const FlatOutput z = flat_output_reach(run.b, cfg.tau, cfg.T, run.N + 1, cfg.M);
  run.envelope = z.envelope();
  const auto table = build_table(cfg.a, run.N);

  const auto back = synthesize_from_b(table, run.b);
  for (std::size_t k = 0; k < std::max(back.size(), y1.size()); ++k) {
    const double lhs = k < back.size() ? back[k] : 0.0;
    const double rhs = k < y1.size() ? y1[k] : 0.0;
    run.roundtrip_defect = std::max(run.roundtrip_defect, std::abs(lhs - rhs));
  }

  const auto times = solver_times(cfg.T, cfg.disc);
  run.u = synthesize_control(table, z, run.N, times);
  run.residual = residual_check(table, z, run.N, linspace(-1.0, 0.0, 21), linspace(0.0, cfg.T, 41));

  run.traj = solve_controlled(run.u, [](double) { return 0.0; }, cfg.a, cfg.T, cfg.disc);
  const std::size_t last = run.traj.t_grid.size() - 1;
  const double tT[] = {cfg.T};
  const auto series = assemble_state(table, z, run.N, run.traj.x_grid, tT);
  for (std::size_t ix = 0; ix < run.traj.x_grid.size(); ++ix) {
    const double target = eval_series(y1, run.traj.x_grid[ix]);
    run.final_error = std::max(run.final_error, std::abs(run.traj.y(last, ix) - target));
    run.series_final_error = std::max(run.series_final_error, std::abs(series.y(0, ix) - target));
  }
  return run;
}

Outcome cmd_null_control(const RunConfig& cfg, const std::filesystem::path& out) {
  const auto run = null_control_pipeline(cfg, make_profile(cfg));
  write_control_csv(out / "u.csv", run.u);
  write_snapshots_csv(out / "state_snapshots.csv", run.traj, cfg.snapshots);
  write_final_csv(out / "final_state.csv", run.traj);

  json report = header(cfg);
  report["N"] = run.N;
  report["trace_depth"] = cfg.trace_depth;
  report["trace_route"] = "modal";
  report["y0_l2"] = run.y0_l2;
  report["final_l2"] = run.final_l2;
  report["final_relative_l2"] = run.relative_final();
  report["tail_bound"] = run.u.tail_bound;
  report["u_max"] = max_abs(run.u.values);
  report["spectral_abscissa"] = run.spectral_abscissa;
  report["envelope"] = envelope_json(run.envelope);
  report["residual"] = residual_json(run.residual);

  CheckList checks;
  checks.at_most("final_relative_l2", run.relative_final(), cfg.tol_steer);
  checks.require("u_zero_on_free_phase", run.free_phase_zero);
  checks.at_most("residual_relative", run.residual.relative(), 1e-10);
  return finish(std::move(report), checks);
}

Outcome cmd_reach(const RunConfig& cfg, const std::filesystem::path& out) {
  const auto run = reach_pipeline(cfg);
  const auto& y1 = cfg.target_coeffs;
  write_control_csv(out / "u.csv", run.u);
  write_snapshots_csv(out / "state_snapshots.csv", run.traj, cfg.snapshots);
  write_final_csv(out / "final_state.csv", run.traj, [&y1](double x) { return eval_series(y1, x); });

  json report = header(cfg);
  report["b"] = run.b;
  report["N"] = run.N;
  report["R0"] = std::exp(1.0 / (3.0 * std::numbers::e)) * std::cbrt(1.0 + cfg.a);
  report["target_entire"] = true;  // targets are polynomials
  report["final_max_error"] = run.final_error;
  report["series_final_max_error"] = run.series_final_error;
  report["roundtrip_defect"] = run.roundtrip_defect;
  report["u_T"] = run.u.values.empty() ? 0.0 : run.u.values.back();
  report["y1_minus1"] = eval_series(y1, -1.0);
  report["tail_bound"] = run.u.tail_bound;
  report["u_max"] = max_abs(run.u.values);
  report["envelope"] = envelope_json(run.envelope);
  report["residual"] = residual_json(run.residual);

  CheckList checks;
  checks.at_most("final_max_error", run.final_error, cfg.tol_reach);
  checks.at_most("roundtrip_defect", run.roundtrip_defect, 1e-10);
  checks.at_most("residual_relative", run.residual.relative(), 1e-10);
  return finish(std::move(report), checks);
}

Outcome cmd_simulate(const RunConfig& cfg, const std::filesystem::path& out) {
  const auto traj = solve_free(make_profile(cfg), cfg.a, cfg.T, cfg.disc);
  write_snapshots_csv(out / "state_snapshots.csv", traj, cfg.snapshots);
  write_final_csv(out / "final_state.csv", traj);
  const auto e = energy_report(traj);

  json report = header(cfg);
  report["energy"] = {{"y0_l2", e.y0_l2},
                      {"final_l2", e.l2_norms.back()},
                      {"dissipation_integral", e.dissipation_integral},
                      {"kato_bound", e.kato_bound},
                      {"kato_ratio", e.kato_ratio},
                      {"kato_margin", e.kato_bound - e.dissipation_integral},
                      {"max_step_growth", e.max_step_growth},
                      {"smoothing_constant", e.smoothing_constant},
                      {"smoothing_t_lo", e.smoothing_t_lo}};
  std::vector<double> times(traj.t_grid);
  write_columns_csv(out / "norms.csv", "t,l2,h1",
                    std::vector<std::vector<double>>{times, e.l2_norms, e.h1_norms});

  CheckList checks;
  checks.at_most("contraction_step_growth", e.max_step_growth, 1e-8);
  checks.at_most("kato_ratio", e.kato_ratio, 1.05);
  return finish(std::move(report), checks);
}

Outcome cmd_airy(const RunConfig& cfg, const std::filesystem::path& out) {
  const auto& o = cfg.airy;
  const auto xs = linspace(o.x_lo, o.x_hi, static_cast<std::size_t>(o.n_x));
  std::vector<double> ts(xs.size(), o.t), E, Ex, defect;
  for (double x : xs) {
    E.push_back(fundamental_solution(x, o.t));
    Ex.push_back(fundamental_solution(x, o.t, 1));
    defect.push_back(fundamental_pde_defect(x, o.t));
  }
  write_columns_csv(out / "airy_samples.csv", "x,t,E,E_x", std::vector<std::vector<double>>{xs, ts, E, Ex});

  // Line solution of a smooth bump; derivative growth in p at t = 1.
  const double L = o.L;
  const Profile bump = [L](double s) {
    const double r = s / L;
    return std::abs(r) < 1.0 ? std::exp(-1.0 / (1.0 - r * r)) : 0.0;
  };
  const double t_fit = 1.0;
  const double half = std::max(0.0, std::cbrt(3.0 * t_fit) * default_airy_table().x_max - L);
  const double x_span = std::min(0.5, half);
  const auto sup = line_derivative_sup(bump, L, -x_span, x_span, 21, t_fit, o.p_max);
  const auto fit = gevrey_fit(sup);
  write_columns_csv(out / "line_derivatives.csv", "p,sup",
                    std::vector<std::vector<double>>{linspace(0.0, o.p_max, static_cast<std::size_t>(o.p_max) + 1), sup});

  std::vector<double> grid4 = linspace(-4.0, 4.0, 401);
  const double ode = airy_ode_check(grid4);
  const auto env = airy_envelope(default_airy_table(), o.R);
  const auto mass = airy_mass();
  const double ai0 = 1.0 / (std::cbrt(9.0) * std::tgamma(2.0 / 3.0));
  const double ai1 = -1.0 / (std::cbrt(3.0) * std::tgamma(1.0 / 3.0));

  json report = header(cfg);
  report["ai0"] = airy_eval(0.0, 0);
  report["ai1"] = airy_eval(0.0, 1);
  report["E_0_third"] = fundamental_solution(0.0, 1.0 / 3.0);
  report["ode_defect_abs_x_le_4"] = ode;
  report["pde_defect_max"] = max_abs(defect);
  report["mass"] = {{"value", mass.mass}, {"window", mass.window}, {"remainder_bound", mass.remainder_bound}};
  report["envelope"] = {{"R", env.R}, {"C2", env.C2}, {"C3", env.C3}, {"C3_argmax", env.C3_argmax},
                        {"tail_ratio", env.tail_ratio}};
  report["line_fit"] = {{"t", t_fit}, {"p_max", o.p_max}, {"s", fit.s}, {"R", fit.R}, {"C", fit.C}};

  CheckList checks;
  checks.at_most("ai0_error", std::abs(airy_eval(0.0, 0) - ai0), 1e-12);
  checks.at_most("ai1_error", std::abs(airy_eval(0.0, 1) - ai1), 1e-12);
  checks.at_most("ode_defect", ode, 1e-10);
  checks.at_most("pde_defect", max_abs(defect), 1e-8);
  checks.at_most("mass_error", std::abs(mass.mass - 1.0), 1e-3);
  checks.within("line_fit_s", fit.s, 0.75 / 3.0, 1.25 / 3.0);
  return finish(std::move(report), checks);
}

int run(const RunConfig& cfg, const std::filesystem::path& out, int verbosity) {
  auto log = [verbosity](const std::string& msg) {
    if (verbosity > 0) fmt::print(stderr, "[kdvflat] {}\n", msg);
  };
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) {
    fmt::print(stderr, "error: cannot create {}: {}\n", out.string(), ec.message());
    return exit_numerical;
  }
  log(fmt::format("running {} into {}", to_string(cfg.command), out.string()));
  Outcome outcome;
  try {
    switch (cfg.command) {
      case Command::null_control: outcome = cmd_null_control(cfg, out); break;
      case Command::reach: outcome = cmd_reach(cfg, out); break;
      case Command::simulate: outcome = cmd_simulate(cfg, out); break;
      case Command::airy: outcome = cmd_airy(cfg, out); break;
      case Command::verify: outcome = cmd_verify(cfg, out); break;
    }
  } catch (const Error& e) {
    json report = header(cfg);
    report["status"] = "error";
    report["error"] = {{"kind", std::string(to_string(e.code()))}, {"message", e.what()}};
    outcome = {std::move(report), exit_code_for(e.code())};
    fmt::print(stderr, "error ({}): {}\n", to_string(e.code()), e.what());
  }
  write_json(out / "report.json", outcome.report);
  if (verbosity > 0) {
    for (const auto& c : outcome.report.value("checks", json::array())) {
      log(fmt::format("{:<32} {}", c.at("name").get<std::string>(), c.at("pass").get<bool>() ? "pass" : "FAIL"));
    }
  }
  log(fmt::format("status {}", outcome.report.value("status", "?")));
  return outcome.exit_code;
}

}  // namespace kdvflat::cli
