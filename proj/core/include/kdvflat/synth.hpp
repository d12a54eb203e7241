#pragma once

// Truncated flatness series
//   y_N(x, t) = sum_{i<=N} g_i(x) z^(i)(t),   u(t) = y_N(-1, t).

#include <span>

#include "kdvflat/flatout.hpp"
#include "kdvflat/genfun.hpp"
#include "kdvflat/trajectory.hpp"

namespace kdvflat {

/// Samples y_N on x_grid x t_grid. Needs N <= table.i_max() (ErrorCode::resolution) and
/// z jets to depth N + 1 (ErrorCode::depth).
Trajectory assemble_state(const GeneratingTable& table, const FlatOutput& z, int N, std::span<const double> x_grid,
                          std::span<const double> t_grid);

/// u(t) = sum_{i<=N} g_i(-1) z^(i)(t) with the tail bound at x = -1 attached. For a
/// null-control output u is exactly 0 for t <= tau.
ControlSignal synthesize_control(const GeneratingTable& table, const FlatOutput& z, int N,
                                 std::span<const double> t_grid);

/// Upper bound on sum_{i>N} M (i!)^s / R^i |x|^(3i+2) / (3i+2)!: explicit terms up to a
/// stopping index that does not depend on N, closed by a geometric majorant. Requires
/// s_env < 3, or s_env = 3 with R_env > 1 (ErrorCode::divergence_risk otherwise); a zero
/// envelope or x = 0 returns 0 without that check.
double truncation_bound(const Envelope& env, int N, double x);

struct ResidualReport {
  double max_defect = 0.0;      ///< max |d_t y_N + P y_N - g_N z^(N+1)|
  double scale = 0.0;           ///< max over samples of the summed term magnitudes
  double max_bc_defect = 0.0;   ///< max |y_N(0,t)| + |d_x y_N(0,t)|
  double max_flat_defect = 0.0; ///< max |d_x^2 y_N(0,t) - z(t)|
  double max_pde_defect = 0.0;  ///< max |d_t y_N + P y_N| (zero when z^(N+1) vanishes)

  double relative() const { return scale > 0.0 ? max_defect / scale : max_defect; }
};

/// Evaluates the telescoping identity d_t y_N + P y_N = g_N z^(N+1) termwise on the series.
ResidualReport residual_check(const GeneratingTable& table, const FlatOutput& z, int N,
                              std::span<const double> x_samples, std::span<const double> t_samples);

}  // namespace kdvflat
