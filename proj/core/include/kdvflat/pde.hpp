#pragma once

// Solver for y_t + y_xxx + a y_x = 0 on [-1, 0] with
//   y(0, t) = y_x(0, t) = 0,   y(-1, t) = u(t),   y(x, 0) = y0(x).
//
// spectral_galerkin: Legendre-Galerkin in xi = 2x + 1. Trial and test space are
// polynomials of degree <= n_x with the three boundary conditions; the Dirichlet
// datum enters through the boundary rows. The semi-discrete energy identity
//   d/dt |y|^2 / 2 = -y_x(-1)^2 / 2   (u = 0)
// holds exactly, so Crank-Nicolson contracts in L2.
// finite_difference: second-order stencils on a uniform grid, kept as a cross-check.

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "kdvflat/jets.hpp"
#include "kdvflat/flatout.hpp"
#include "kdvflat/trajectory.hpp"

namespace kdvflat {

enum class Scheme { spectral_galerkin, finite_difference };
enum class Stepper {
  theta,      ///< plain theta-scheme
  rannacher,  ///< backward-Euler half steps at start-up, then the theta-scheme
};

struct Discretization {
  int n_x = 64;  ///< polynomial degree (spectral) or number of intervals (finite difference)
  Scheme scheme = Scheme::spectral_galerkin;
  int n_t = 1000;
  Stepper stepper = Stepper::rannacher;
  double theta = 0.5;
  int startup_steps = 4;  ///< backward-Euler half steps (rannacher only)
  int store_every = 1;
  int n_samples = 101;    ///< x samples of the field (spectral only; FD uses its nodes)

  /// Throws ErrorCode::invalid_argument unless n_x >= 16, n_t >= 1, theta in [1/2, 1].
  void validate() const;
};

/// Times at which the solver evaluates the boundary datum (including start-up half steps).
std::vector<double> solver_times(double T, const Discretization& disc);

using BoundaryData = std::function<double(double t)>;

/// Free evolution (u = 0). Throws ErrorCode::stability if the L2 norm exceeds 10 |y0|
/// or a value is non-finite.
Trajectory solve_free(const Profile& y0, double a, double T, const Discretization& disc);

/// Controlled evolution with y(-1, t) = u(t).
Trajectory solve_controlled(const BoundaryData& u, const Profile& y0, double a, double T,
                            const Discretization& disc);
/// Same, with u interpolated from the samples (4-point Lagrange, exact at sample times).
Trajectory solve_controlled(const ControlSignal& u, const Profile& y0, double a, double T,
                            const Discretization& disc);

/// L2 norm of the state at time index it (exact for Legendre states, trapezoid for nodal).
double state_l2(const Trajectory& traj, std::size_t it);
/// |y_x| in L2 at time index it.
double state_dx_l2(const Trajectory& traj, std::size_t it);

/// Highest depth the spatial trace route accepts.
inline constexpr int kSpatialTraceCap = 6;

/// w^(n)(t) = (-1)^n d_x^2 (P^n y)(0, t) evaluated on the stored Legendre state at time
/// index it. Throws ErrorCode::depth beyond kSpatialTraceCap and ErrorCode::invalid_argument
/// for non-spectral trajectories.
Jet spatial_trace_jet(const Trajectory& traj, std::size_t it, int depth);

/// Highest depth the modal trace route accepts.
inline constexpr int kModalTraceCap = 40;

/// Jets of w(t) = d_x^2 y(0, t) for the exact semi-discrete free semigroup,
///   w^(n)(t) = sum_k c_k lambda_k^n e^{lambda_k t} v_k''(0),
/// with c_k from left eigenvectors of the Galerkin operator.
class ModalTrace {
 public:
  ModalTrace(const Profile& y0, double a, const Discretization& disc, double epsilon);

  /// Throws ErrorCode::roughness for t < epsilon, ErrorCode::depth beyond kModalTraceCap.
  Jet jet(double t, int depth) const;

  double epsilon() const noexcept { return epsilon_; }
  const std::vector<std::complex<double>>& eigenvalues() const noexcept { return lambda_; }
  /// Trace weights c_k v_k''(0), aligned with eigenvalues().
  const std::vector<std::complex<double>>& weights() const noexcept { return weight_; }
  /// max Re(lambda).
  double spectral_abscissa() const;

  /// Adapter for flat_output_null on [epsilon, T]. Throws ErrorCode::depth beyond kModalTraceCap.
  TraceSource source(double T, int max_depth) const;

 private:
  double epsilon_;
  std::vector<std::complex<double>> lambda_;
  std::vector<std::complex<double>> weight_;  ///< c_k v_k''(0)
};

struct EnergyReport {
  std::vector<double> l2_norms;
  std::vector<double> h1_norms;
  double y0_l2 = 0.0;
  double dissipation_integral = 0.0;  ///< int_0^T |y_x|^2 dt (trapezoid on stored times)
  double kato_bound = 0.0;            ///< (aT + 1)/3 |y0|^2
  double kato_ratio = 0.0;            ///< dissipation_integral / kato_bound
  double max_step_growth = 0.0;       ///< max_k |y^{k+1}| / |y^k| - 1
  double smoothing_constant = 0.0;       ///< sup_{t in [t_lo, T]} sqrt(t) |y(t)|_H1 / |y0|
  double smoothing_t_lo = 0.05;
};

EnergyReport energy_report(const Trajectory& traj, double smoothing_t_lo = 0.05);

}  // namespace kdvflat
