#include "kdvflat/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kdvflat/error.hpp"

namespace kdvflat {
namespace {

void require_series(const GeneratingTable& table, const FlatOutput& z, int N) {
  if (N < 0) fail(ErrorCode::invalid_argument, "truncation order N must be >= 0");
  if (N > table.i_max()) {
    fail(ErrorCode::resolution, "table holds g_0..g_" + std::to_string(table.i_max()) + ", series needs g_" +
                                    std::to_string(N));
  }
  if (z.max_depth() < N + 1) {
    fail(ErrorCode::depth, "flat output supplies depth " + std::to_string(z.max_depth()) + ", series needs " +
                               std::to_string(N + 1));
  }
}

// log of M (i!)^s / R^i |x|^(3i+2) / (3i+2)!
double log_term(const Envelope& env, int i, double log_abs_x) {
  const double di = static_cast<double>(i);
  return std::log(env.M_env) + env.s_env * std::lgamma(di + 1.0) - di * std::log(env.R_env) +
         (3.0 * di + 2.0) * log_abs_x - std::lgamma(3.0 * di + 3.0);
}

double ratio(const Envelope& env, int i, double log_abs_x) {
  return std::exp(log_term(env, i + 1, log_abs_x) - log_term(env, i, log_abs_x));
}

}  // namespace

Trajectory assemble_state(const GeneratingTable& table, const FlatOutput& z, int N, std::span<const double> x_grid,
                          std::span<const double> t_grid) {
  require_series(table, z, N);
  Trajectory traj;
  traj.x_grid.assign(x_grid.begin(), x_grid.end());
  traj.t_grid.assign(t_grid.begin(), t_grid.end());
  traj.provenance = Provenance::series;
  traj.a = table.a();
  traj.field.assign(x_grid.size() * t_grid.size(), 0.0);

  std::vector<std::vector<double>> g(static_cast<std::size_t>(N) + 1, std::vector<double>(x_grid.size()));
  for (int i = 0; i <= N; ++i) {
    for (std::size_t ix = 0; ix < x_grid.size(); ++ix) g[static_cast<std::size_t>(i)][ix] = eval_g(table, i, x_grid[ix]);
  }
  for (std::size_t it = 0; it < t_grid.size(); ++it) {
    const auto d = z.jet(t_grid[it], N + 1).derivatives();
    for (std::size_t ix = 0; ix < x_grid.size(); ++ix) {
      double y = 0.0;
      for (int i = N; i >= 0; --i) y += g[static_cast<std::size_t>(i)][ix] * d[static_cast<std::size_t>(i)];
      traj.y(it, ix) = y;
    }
  }
  return traj;
}

ControlSignal synthesize_control(const GeneratingTable& table, const FlatOutput& z, int N,
                                 std::span<const double> t_grid) {
  require_series(table, z, N);
  ControlSignal u;
  u.times.assign(t_grid.begin(), t_grid.end());
  u.values.assign(t_grid.size(), 0.0);
  u.depth = N;
  std::vector<double> g_left(static_cast<std::size_t>(N) + 1);
  for (int i = 0; i <= N; ++i) g_left[static_cast<std::size_t>(i)] = eval_g(table, i, -1.0);
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    const double t = t_grid[k];
    if (z.kind() == FlatKind::null_control && t <= z.tau()) continue;  // free phase
    const auto d = z.jet(t, N + 1).derivatives();
    double s = 0.0;
    for (int i = N; i >= 0; --i) s += g_left[static_cast<std::size_t>(i)] * d[static_cast<std::size_t>(i)];
    if (!std::isfinite(s)) fail(ErrorCode::range, "non-finite control sample at t = " + std::to_string(t));
    u.values[k] = s;
  }
  u.tail_bound = truncation_bound(z.envelope(), N, -1.0);
  return u;
}

double truncation_bound(const Envelope& env, int N, double x) {
  if (N < 0) fail(ErrorCode::invalid_argument, "truncation order N must be >= 0");
  if (!(x >= -1.0 && x <= 0.0)) fail(ErrorCode::domain, "truncation bound is certified on [-1, 0] only");
  if (!(env.R_env > 0.0) || !(env.M_env >= 0.0)) fail(ErrorCode::invalid_argument, "envelope needs R > 0, M >= 0");
  if (env.M_env == 0.0 || x == 0.0) return 0.0;
  if (env.s_env > 3.0 || (env.s_env == 3.0 && !(env.R_env > 1.0))) {
    fail(ErrorCode::divergence_risk, "series convergence needs s < 3, or s = 3 with R > 1 (got s = " +
                                         std::to_string(env.s_env) + ", R = " + std::to_string(env.R_env) + ")");
  }
  const double lx = std::log(std::abs(x));

  if (env.s_env == 3.0) {
    // Ratios increase towards |x|^3 / (27 R) < 1.
    const double limit = std::abs(x * x * x) / (27.0 * env.R_env);
    return std::exp(log_term(env, N + 1, lx)) / (1.0 - limit);
  }

  // For s < 3 the term ratio r_i is decreasing once i exceeds i_mono.
  const double s = env.s_env;
  const int i_mono = std::max(0, static_cast<int>(std::ceil(((s - 1.0) * 5.0 / 3.0 - 2.0) / (3.0 - s))) + 1);
  int K = i_mono;
  while (ratio(env, K, lx) > 0.5) ++K;
  K += 16;

  if (N >= K) {
    return std::exp(log_term(env, N + 1, lx)) / (1.0 - ratio(env, N + 1, lx));
  }
  double sum = 0.0;
  for (int i = N + 1; i <= K; ++i) sum += std::exp(log_term(env, i, lx));
  sum += std::exp(log_term(env, K + 1, lx)) / (1.0 - ratio(env, K + 1, lx));
  return sum;
}

ResidualReport residual_check(const GeneratingTable& table, const FlatOutput& z, int N,
                              std::span<const double> x_samples, std::span<const double> t_samples) {
  require_series(table, z, N);
  const double a = table.a();
  std::vector<PowerSeries> pg;
  for (int i = 0; i <= N; ++i) pg.push_back(apply_P(table.coeffs(i), a, 1));

  ResidualReport rep;
  for (double t : t_samples) {
    const auto d = z.jet(t, N + 1).derivatives();
    const auto du = [&](int i) { return d[static_cast<std::size_t>(i)]; };
    for (double x : x_samples) {
      double delta = 0.0;
      double mag = 0.0;
      for (int i = 0; i <= N; ++i) {
        const double dt_term = eval_g(table, i, x) * du(i + 1);
        const double p_term = eval_series(pg[static_cast<std::size_t>(i)], x) * du(i);
        delta += dt_term + p_term;
        mag += std::abs(dt_term) + std::abs(p_term);
      }
      const double tail = eval_g(table, N, x) * du(N + 1);
      rep.max_pde_defect = std::max(rep.max_pde_defect, std::abs(delta));
      rep.max_defect = std::max(rep.max_defect, std::abs(delta - tail));
      rep.scale = std::max(rep.scale, mag + std::abs(tail));
    }
    double y0 = 0.0, y1 = 0.0, y2 = 0.0;
    for (int i = 0; i <= N; ++i) {
      y0 += eval_g(table, i, 0.0, 0) * du(i);
      y1 += eval_g(table, i, 0.0, 1) * du(i);
      y2 += eval_g(table, i, 0.0, 2) * du(i);
    }
    rep.max_bc_defect = std::max(rep.max_bc_defect, std::abs(y0) + std::abs(y1));
    rep.max_flat_defect = std::max(rep.max_flat_defect, std::abs(y2 - du(0)));
  }
  return rep;
}

}  // namespace kdvflat
