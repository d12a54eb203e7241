#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "kdvflat/airy.hpp"
#include "kdvflat/analysis.hpp"
#include "kdvflat/genfun.hpp"
#include "kdvflat/pde.hpp"
#include "kdvflat_cli/artifacts.hpp"
#include "kdvflat_cli/commands.hpp"

namespace kdvflat::cli {
namespace {

using nlohmann::json;

class Tables {
 public:
  explicit Tables(const std::optional<Mutation>& m) : mutation_(m) {}

  GeneratingTable operator()(double a, int i_max) const {
    auto t = build_table(a, i_max);
    if (mutation_ && mutation_->i <= i_max && mutation_->k < t.n_terms()) {
      t.perturb(mutation_->i, mutation_->k, mutation_->delta);
    }
    return t;
  }

 private:
  std::optional<Mutation> mutation_;
};

void genfun_checks(const Tables& tables, CheckList& checks) {
  const auto grid201 = linspace(-1.0, 0.0, 201);
  const auto grid101 = linspace(-1.0, 0.0, 101);
  double recurrence = 0.0;
  double shift = 0.0;
  for (double a : {0.0, 1.0, 4.0}) {
    const auto t = tables(a, 30);
    checks.at_most(fmt::format("generating_envelope_a{}", a), check_lemma1(t, grid201).max_ratio(), 1.0 + 1e-10);
    for (int i = 0; i <= 30; ++i) {
      for (double x : grid101) {
        double r = eval_g(t, i, x, 3) + a * eval_g(t, i, x, 1);
        if (i > 0) r += eval_g(t, i - 1, x);
        recurrence = std::max(recurrence, std::abs(r));
      }
    }
    for (int i = 0; i <= 12; ++i) {
      for (int n = 0; n <= i; ++n) {
        const auto lhs = apply_P(t.coeffs(i), a, n);
        const auto rhs = t.coeffs(i - n);
        const double sign = n % 2 == 0 ? 1.0 : -1.0;
        for (std::size_t k = 0; k < rhs.size(); ++k) shift = std::max(shift, std::abs(lhs[k] - sign * rhs[k]));
      }
    }
  }
  checks.at_most("recurrence_residual", recurrence, 1e-12);
  checks.at_most("P_shift_identity", shift, 1e-12);

  double conv = 0.0;
  for (double a : {0.0, 1.0}) {
    const auto t = tables(a, 5);
    for (int i = 0; i <= 5; ++i) {
      for (double x : linspace(-1.0, 0.0, 11)) conv = std::max(conv, std::abs(eval_g(t, i, x) - g_by_convolution(a, i, x)));
    }
  }
  checks.at_most("convolution_oracle", conv, 1e-9);
}

void synth_checks(const Tables& tables, const RunConfig& cfg, CheckList& checks) {
  const auto xs = linspace(-1.0, 0.0, 21);
  const double T = 1.0;
  const double tau = 0.5;

  // Reach pipeline, fig1 target.
  double reach_res = 0.0;
  double flat = 0.0;
  double bc = 0.0;
  const std::vector<double> b{3.0, -3.0, 3.0, -3.0, 3.0, -3.0, 3.0};
  for (double a : {0.0, 1.0}) {
    const auto t = tables(a, 12);
    for (int N = 0; N <= 12; ++N) {
      const auto z = flat_output_reach(b, tau, T, std::max<int>(N + 1, static_cast<int>(b.size())), cfg.M);
      const auto r = residual_check(t, z, N, xs, linspace(0.0, T, 41));
      reach_res = std::max(reach_res, r.relative());
      flat = std::max(flat, r.max_flat_defect);
      bc = std::max(bc, r.max_bc_defect);
    }
  }
  checks.at_most("residual_identity_reach", reach_res, 1e-10);

  // Null-control pipeline, sin(pi x).
  double null_res = 0.0;
  {
    const double eps = 0.05 * T;
    const ModalTrace trace([](double x) { return std::sin(std::numbers::pi * x); }, 1.0, cfg.disc, eps);
    const auto t = tables(1.0, 12);
    const StepParams step{2.0, cfg.M, tau, T};
    for (int N = 0; N <= 12; ++N) {
      const auto z = flat_output_null(trace.source(T, cfg.trace_depth), step, N + 1);
      const auto r = residual_check(t, z, N, xs, linspace(eps, T, 41));
      null_res = std::max(null_res, r.relative());
      flat = std::max(flat, r.max_flat_defect);
      bc = std::max(bc, r.max_bc_defect);
    }
  }
  checks.at_most("residual_identity_null", null_res, 1e-10);
  checks.at_most("flat_output_recovery", flat, 1e-12);
  checks.at_most("series_boundary_rows", bc, 1e-12);

  // Polynomial z of degree N: the truncated series is an exact solution.
  {
    const int N = 3;
    const FlatOutput z(FlatKind::reach, tau, T, N + 1, [](double t0, int d) {
      const Jet t = jet_var(t0, d);
      return 0.3 - t + 0.5 * t * t + 2.0 * t * t * t;
    });
    const auto r = residual_check(tables(1.0, N), z, N, xs, linspace(0.0, T, 41));
    checks.at_most("exact_solution_pde", r.max_pde_defect / std::max(r.scale, 1.0), 1e-10);
    checks.at_most("exact_solution_bc", r.max_bc_defect, 1e-10);
  }

  // Tail bound never increases with N.
  {
    const Envelope env{1.0, 0.8, 2.0};
    bool mono = true;
    double prev = truncation_bound(env, 0, -1.0);
    for (int N = 1; N <= 30; ++N) {
      const double b = truncation_bound(env, N, -1.0);
      mono = mono && b <= prev;
      prev = b;
    }
    checks.require("tail_bound_monotone", mono);
  }
}

void flatout_checks(const RunConfig& cfg, CheckList& checks) {
  const StepParams step{2.0, cfg.M, 0.5, 1.0};
  const int depth = 12;
  auto constant = [](const Jet& j, double v) {
    for (int k = 0; k <= j.order(); ++k) {
      if (j.coeff(k) != (k == 0 ? v : 0.0)) return false;
    }
    return true;
  };
  checks.require("step_plateaus_exact", constant(step_phi(step, -0.2, depth), 1.0) &&
                                            constant(step_phi(step, 1.2, depth), 0.0) &&
                                            constant(step_phi(step, 0.0, depth), 1.0) &&
                                            constant(step_phi(step, 1.0, depth), 0.0));

  double glue = 0.0;
  for (double rho : {0.005, 0.995}) {
    const auto j = step_phi(step, rho, 10);
    const double target = rho < 0.5 ? 1.0 : 0.0;
    for (int k = 0; k <= 10; ++k) glue = std::max(glue, std::abs(j.derivative(k) - (k == 0 ? target : 0.0)));
  }
  checks.at_most("step_gluing", glue, 1e-10);

  const double b[] = {3.0, -3.0, 3.0, -3.0, 3.0, -3.0, 3.0};
  const auto z = flat_output_reach(b, 0.5, 1.0, 12, cfg.M);
  double at_T = 0.0;
  double at_0 = 0.0;
  const auto dT = z.jet(1.0, 12).derivatives();
  const auto d0 = z.jet(0.0, 12).derivatives();
  for (int i = 0; i <= 12; ++i) {
    at_T = std::max(at_T, std::abs(dT[static_cast<std::size_t>(i)] - (i < 7 ? b[i] : 0.0)));
    at_0 = std::max(at_0, std::abs(d0[static_cast<std::size_t>(i)]));
  }
  checks.at_most("reach_jets_at_T", at_T, 1e-12);
  checks.at_most("reach_jets_at_0", at_0, 1e-12);

  std::vector<double> sup(25, 0.0);
  for (int k = 1; k < 1000; ++k) {
    const auto d = step_phi(step, k / 1000.0, 24).derivatives();
    for (std::size_t i = 0; i < sup.size(); ++i) sup[i] = std::max(sup[i], std::abs(d[i]));
  }
  checks.within("gevrey_phi2_s", gevrey_fit(sup).s, 1.8, 2.2);
}

void energy_checks(const RunConfig& cfg, CheckList& checks, json& report) {
  RunConfig rc = cfg;
  rc.y0 = "random_smooth";
  const auto y0 = make_profile(rc);
  const auto coarse = energy_report(solve_free(y0, 1.0, 1.0, cfg.disc));
  Discretization fine_disc = cfg.disc;
  fine_disc.n_t *= 2;
  fine_disc.n_x *= 2;
  const auto fine = energy_report(solve_free(y0, 1.0, 1.0, fine_disc));
  checks.at_most("contraction_step_growth", std::max(coarse.max_step_growth, fine.max_step_growth), 1e-8);
  checks.at_most("kato_ratio", std::max(coarse.kato_ratio, fine.kato_ratio), 1.05);
  const double drift = std::abs(fine.smoothing_constant - coarse.smoothing_constant) / coarse.smoothing_constant;
  checks.at_most("smoothing_refinement_drift", drift, 0.10);
  report["smoothing_constant"] = {coarse.smoothing_constant, fine.smoothing_constant};
  report["kato_ratio"] = {coarse.kato_ratio, fine.kato_ratio};
}

void airy_checks(CheckList& checks) {
  const double ai0 = 1.0 / (std::cbrt(9.0) * std::tgamma(2.0 / 3.0));
  const double ai1 = -1.0 / (std::cbrt(3.0) * std::tgamma(1.0 / 3.0));
  checks.at_most("airy_ai0", std::abs(airy_eval(0.0, 0) - ai0), 1e-12);
  checks.at_most("airy_ai1", std::abs(airy_eval(0.0, 1) - ai1), 1e-12);
  const auto grid = linspace(-4.0, 4.0, 401);
  checks.at_most("airy_ode_defect", airy_ode_check(grid), 1e-10);
  double pde = 0.0;
  for (double t : {0.1, 1.0 / 3.0, 1.0, 2.0}) {
    for (double x : linspace(-1.5, 1.5, 31)) pde = std::max(pde, fundamental_pde_defect(x, t));
  }
  checks.at_most("airy_pde_defect", pde, 1e-8);
  checks.at_most("airy_mass", std::abs(airy_mass().mass - 1.0), 1e-3);
  bool env_ok = true;
  for (double R : {0.5, 0.9}) {
    const auto env = airy_envelope(default_airy_table(), R);
    env_ok = env_ok && std::isfinite(env.C3) && env.C3 > 0.0 && env.tail_ratio < 1.0;
  }
  checks.require("airy_envelope", env_ok);
  const Profile bump = [](double s) { return std::abs(s) < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0; };
  const auto sup = line_derivative_sup(bump, 1.0, -0.5, 0.5, 21, 1.0, 30);
  checks.within("line_solution_gevrey_s", gevrey_fit(sup).s, 0.75 / 3.0, 1.25 / 3.0);
}

void lemma_checks(const RunConfig& cfg, CheckList& checks, json& report) {
  const double as[] = {0.5, 1.0, 4.0};
  const auto sw = lemma_sweep(cfg.lemma_count, 9, cfg.seed, as, 3);
  checks.at_most("lemma21_failures", sw.lemma21_failures, 0);
  checks.at_most("lemma10_left_failures", sw.lemma10_failures, 0);
  report["lemma_sweep"] = {{"polynomials", sw.polynomials},
                           {"checks", sw.checks},
                           {"worst_lemma21_ratio", sw.worst_lemma21_ratio},
                           {"worst_lemma10_ratio", sw.worst_lemma10_ratio}};
  std::vector<PolyFn> sample;
  for (int k = 0; k < 1000; ++k) {
    sample.push_back(random_polynomial_isotropic(6, cfg.seed + static_cast<std::uint64_t>(k)));
  }
  json fits = json::array();
  for (double a : as) {
    for (auto [p, name] : {std::pair{LpNorm::L1, "L1"}, std::pair{LpNorm::L2, "L2"}, std::pair{LpNorm::Linf, "Linf"}}) {
      fits.push_back({{"a", a},
                      {"p", name},
                      {"lemma22_C1", lemma22_fit(sample, a, p)},
                      {"lemma10_K_n1", lemma10_right_fit(sample, a, 1, p)},
                      {"lemma10_K_n3", lemma10_right_fit(sample, a, 3, p)}});
    }
  }
  report["empirical_constants"] = fits;
}

void pipeline_checks(const RunConfig& cfg, CheckList& checks) {
  RunConfig nc = cfg;
  nc.a = 1.0;
  nc.T = 1.0;
  nc.tau = 0.5;
  nc.s = 2.0;
  nc.N = 12;
  const auto null_run = null_control_pipeline(nc, [](double x) { return std::sin(std::numbers::pi * x); });
  checks.at_most("null_control_final_relative_l2", null_run.relative_final(), cfg.tol_steer);
  checks.require("null_control_free_phase_zero", null_run.free_phase_zero);

  RunConfig rc = cfg;
  rc.a = 0.0;
  rc.T = 1.0;
  rc.tau = 0.5;
  rc.N.reset();
  rc.target_terms.reset();
  rc.target_coeffs = resolve_target("x2");
  const auto reach_run = reach_pipeline(rc);
  checks.at_most("reach_x2_final_error", reach_run.final_error, cfg.tol_reach);
  checks.at_most("reach_x2_roundtrip", reach_run.roundtrip_defect, 1e-10);
}

}  // namespace

Outcome cmd_verify(const RunConfig& cfg, const std::filesystem::path&) {
  const Tables tables(cfg.mutate_g);
  CheckList checks;
  json report{{"schema_version", kReportSchemaVersion}, {"command", "verify"}, {"config", cfg.source}};
  if (cfg.mutate_g) report["mutation"] = {{"i", cfg.mutate_g->i}, {"k", cfg.mutate_g->k}, {"delta", cfg.mutate_g->delta}};
  genfun_checks(tables, checks);
  synth_checks(tables, cfg, checks);
  flatout_checks(cfg, checks);
  energy_checks(cfg, checks, report);
  airy_checks(checks);
  lemma_checks(cfg, checks, report);
  pipeline_checks(cfg, checks);
  report["checks"] = checks.items();
  report["status"] = checks.all_pass() ? "ok" : "property_failure";
  return {std::move(report), checks.all_pass() ? exit_ok : exit_property};
}

}  // namespace kdvflat::cli
