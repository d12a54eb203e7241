#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "kdvflat/flatout.hpp"
#include "kdvflat/genfun.hpp"
#include "kdvflat/pde.hpp"
#include "kdvflat/quadrature.hpp"
#include "kdvflat/synth.hpp"
#include "support.hpp"

namespace kdvflat {
namespace {

using test::error_of;

const Profile cubic_profile = [](double x) { return x * x * (x + 1.0); };

// z(t) = 0.3 - t + 0.5 t^2 + 2 t^3; with N = 3 the series y = sum g_i z^(i) is exact.
double q(double t) { return 0.3 - t + 0.5 * t * t + 2.0 * t * t * t; }
double dq(double t) { return -1.0 + t + 6.0 * t * t; }

FlatOutput cubic_output() {
  return FlatOutput(FlatKind::reach, 0.5, 1.0, 4, [](double t0, int d) {
    const Jet t = jet_var(t0, d);
    return 0.3 - t + 0.5 * t * t + 2.0 * t * t * t;
  });
}

struct Manufactured {
  GeneratingTable table;
  FlatOutput z;
  Profile y0;
};

Manufactured manufactured(double a) {
  auto table = build_table(a, 3);
  auto z = cubic_output();
  const auto w = z.jet(0.0, 4).derivatives();
  Profile y0 = [table, w](double x) {
    double s = 0.0;
    for (int i = 0; i <= 3; ++i) s += eval_g(table, i, x) * w[static_cast<std::size_t>(i)];
    return s;
  };
  return {std::move(table), std::move(z), std::move(y0)};
}

double max_field_error(const Trajectory& traj, const Manufactured& m) {
  const auto exact = assemble_state(m.table, m.z, 3, traj.x_grid, traj.t_grid);
  double err = 0.0;
  for (std::size_t k = 0; k < traj.field.size(); ++k) err = std::max(err, std::abs(traj.field[k] - exact.field[k]));
  return err;
}

TEST(Discretization, Validation) {
  Discretization d;
  EXPECT_NO_THROW(d.validate());
  d.n_x = 8;
  EXPECT_EQ(error_of([&] { d.validate(); }), ErrorCode::invalid_argument);
  d = {};
  d.n_t = 0;
  EXPECT_EQ(error_of([&] { d.validate(); }), ErrorCode::invalid_argument);
  d = {};
  d.theta = 0.4;
  EXPECT_EQ(error_of([&] { d.validate(); }), ErrorCode::invalid_argument);
  d.theta = 1.0;
  EXPECT_NO_THROW(d.validate());
}

TEST(SolverTimes, CoverTheHorizon) {
  Discretization d;
  d.n_t = 10;
  const auto ts = solver_times(2.0, d);
  EXPECT_EQ(ts.front(), 0.0);
  EXPECT_DOUBLE_EQ(ts.back(), 2.0);
  EXPECT_TRUE(std::is_sorted(ts.begin(), ts.end()));
}

TEST(SolveFree, ZeroDataStaysZero) {
  Discretization d;
  d.n_t = 50;
  const auto traj = solve_free([](double) { return 0.0; }, 1.0, 1.0, d);
  EXPECT_EQ(traj.provenance, Provenance::pde_solver);
  for (double v : traj.field) EXPECT_EQ(v, 0.0);
}

TEST(SolveFree, L2NormNeverGrows) {
  for (double a : {0.0, 1.0, 4.0}) {
    for (Stepper st : {Stepper::theta, Stepper::rannacher}) {
      Discretization d;
      d.n_t = 200;
      d.stepper = st;
      const auto traj = solve_free(cubic_profile, a, 1.0, d);
      for (std::size_t k = 0; k + 1 < traj.t_grid.size(); ++k) {
        EXPECT_LE(state_l2(traj, k + 1), state_l2(traj, k) * (1.0 + 1e-12)) << "a=" << a << " k=" << k;
      }
    }
  }
}

TEST(SolveFree, EnergyIdentityHoldsForCrankNicolson) {
  // |y(T)|^2 - |y0|^2 = -int y_x(-1, t)^2 dt, midpoint in time
  Discretization d;
  d.stepper = Stepper::theta;
  d.n_t = 400;
  for (double a : {0.0, 2.0}) {
    const auto traj = solve_free(cubic_profile, a, 1.0, d);
    double flux = 0.0;
    for (std::size_t k = 0; k + 1 < traj.t_grid.size(); ++k) {
      const double dt = traj.t_grid[k + 1] - traj.t_grid[k];
      const double m = (legendre_eval(traj.states[k], -1.0, 1) + legendre_eval(traj.states[k + 1], -1.0, 1));
      flux += dt * m * m;  // (2 * mean of d/dxi)^2
    }
    const double l0 = state_l2(traj, 0);
    const double lT = state_l2(traj, traj.t_grid.size() - 1);
    EXPECT_NEAR(lT * lT - l0 * l0, -flux, 1e-12 * l0 * l0) << "a=" << a;
  }
}

TEST(SolveControlled, ZeroControlMatchesFreeEvolution) {
  Discretization d;
  d.n_t = 100;
  const auto free = solve_free(cubic_profile, 1.0, 1.0, d);
  const auto ctl = solve_controlled([](double) { return 0.0; }, cubic_profile, 1.0, 1.0, d);
  ASSERT_EQ(free.field.size(), ctl.field.size());
  for (std::size_t k = 0; k < free.field.size(); ++k) EXPECT_EQ(free.field[k], ctl.field[k]);
}

TEST(SolveControlled, ManufacturedSolution) {
  for (double a : {0.0, 1.0}) {
    const auto m = manufactured(a);
    const Discretization d;
    const auto u = synthesize_control(m.table, m.z, 3, solver_times(1.0, d));
    const auto traj = solve_controlled(u, m.y0, a, 1.0, d);
    EXPECT_LE(max_field_error(traj, m), 1e-4) << "a=" << a;
  }
}

TEST(SolveControlled, FiniteDifferenceCrossCheck) {
  const auto m = manufactured(1.0);
  Discretization d;
  d.scheme = Scheme::finite_difference;
  d.n_x = 200;
  d.n_t = 2000;
  const auto u = synthesize_control(m.table, m.z, 3, solver_times(1.0, d));
  const auto traj = solve_controlled(u, m.y0, 1.0, 1.0, d);
  EXPECT_EQ(traj.state_kind, StateKind::nodal);
  EXPECT_LE(max_field_error(traj, m), 1e-2);
}

TEST(SolveControlled, BoundaryValuesFollowTheControl) {
  const Discretization d;
  const auto traj = solve_controlled([](double t) { return std::sin(3.0 * t) * t; },
                                     [](double) { return 0.0; }, 1.0, 1.0, d);
  for (std::size_t it = 0; it < traj.t_grid.size(); it += 50) {
    const double t = traj.t_grid[it];
    const auto& c = traj.states[it];
    EXPECT_NEAR(legendre_eval(c, -1.0), std::sin(3.0 * t) * t, 1e-12);
    EXPECT_NEAR(legendre_eval(c, 1.0), 0.0, 1e-12);
    EXPECT_NEAR(legendre_eval(c, 1.0, 1), 0.0, 1e-10);
  }
}

TEST(SolveFree, RejectsBadInput) {
  const Discretization d;
  EXPECT_EQ(error_of([&] { solve_free(cubic_profile, 1.0, -1.0, d); }), ErrorCode::invalid_argument);
  EXPECT_EQ(error_of([&] { solve_free(cubic_profile, -1.0, 1.0, d); }), ErrorCode::invalid_argument);
}

TEST(SpatialTrace, DepthZeroIsTheSecondDerivative) {
  Discretization d;
  d.n_t = 100;
  const auto traj = solve_free(cubic_profile, 1.0, 1.0, d);
  for (std::size_t it : {std::size_t{0}, std::size_t{40}, traj.t_grid.size() - 1}) {
    EXPECT_DOUBLE_EQ(spatial_trace_jet(traj, it, 0).value(), 4.0 * legendre_eval(traj.states[it], 1.0, 2));
  }
  // projection round-off at n_x = 64
  EXPECT_NEAR(spatial_trace_jet(traj, 0, 0).value(), 2.0, 1e-8);
}

TEST(SpatialTrace, Errors) {
  Discretization d;
  d.n_t = 20;
  const auto traj = solve_free(cubic_profile, 1.0, 1.0, d);
  EXPECT_NO_THROW(spatial_trace_jet(traj, 1, kSpatialTraceCap));
  EXPECT_EQ(error_of([&] { spatial_trace_jet(traj, 1, kSpatialTraceCap + 1); }), ErrorCode::depth);
  EXPECT_EQ(error_of([&] { spatial_trace_jet(traj, traj.t_grid.size(), 0); }), ErrorCode::invalid_argument);
  d.scheme = Scheme::finite_difference;
  d.n_x = 40;
  const auto fd = solve_free(cubic_profile, 1.0, 1.0, d);
  EXPECT_EQ(error_of([&] { spatial_trace_jet(fd, 1, 0); }), ErrorCode::invalid_argument);
}

TEST(SpatialTrace, RecoversTheFlatOutputAndItsDerivative) {
  // The depth-1 value is a fifth x-derivative at the boundary; round-off in the
  // high Legendre modes limits it to about 1e-6.
  const auto m = manufactured(1.0);
  const Discretization d;
  const auto u = synthesize_control(m.table, m.z, 3, solver_times(1.0, d));
  const auto traj = solve_controlled(u, m.y0, 1.0, 1.0, d);
  double e0 = 0.0;
  double e1 = 0.0;
  for (std::size_t it = 0; it < traj.t_grid.size(); ++it) {
    const double t = traj.t_grid[it];
    if (t < 0.1) continue;
    const auto j = spatial_trace_jet(traj, it, 1);
    e0 = std::max(e0, std::abs(j.value() - q(t)));
    e1 = std::max(e1, std::abs(j.derivative(1) - dq(t)));
  }
  EXPECT_LE(e0, 1e-7);
  EXPECT_LE(e1, 5e-6);
}

TEST(ModalTrace, SpectrumIsDissipative) {
  for (double a : {0.0, 1.0, 4.0}) {
    const ModalTrace mt(cubic_profile, a, Discretization{}, 0.05);
    EXPECT_LT(mt.spectral_abscissa(), 0.0) << "a=" << a;
    EXPECT_EQ(mt.eigenvalues().size(), mt.weights().size());
  }
}

TEST(ModalTrace, AgreesWithTheSpatialRoute) {
  Discretization d;
  d.n_t = 2000;
  const auto traj = solve_free(cubic_profile, 1.0, 1.0, d);
  const ModalTrace mt(cubic_profile, 1.0, d, 0.05);
  for (std::size_t it = 200; it < traj.t_grid.size(); it += 400) {
    const double t = traj.t_grid[it];
    const auto s = spatial_trace_jet(traj, it, 1);
    const auto j = mt.jet(t, 1);
    EXPECT_NEAR(j.value(), s.value(), 1e-6 * (1.0 + std::abs(s.value()))) << "t=" << t;
    EXPECT_NEAR(j.derivative(1), s.derivative(1), 1e-3 * (1.0 + std::abs(s.derivative(1)))) << "t=" << t;
  }
}

TEST(ModalTrace, Errors) {
  const ModalTrace mt(cubic_profile, 1.0, Discretization{}, 0.05);
  EXPECT_EQ(error_of([&] { mt.jet(0.01, 2); }), ErrorCode::roughness);
  EXPECT_EQ(error_of([&] { mt.jet(0.5, kModalTraceCap + 1); }), ErrorCode::depth);
  EXPECT_NO_THROW(mt.jet(0.5, kModalTraceCap));
  EXPECT_EQ(error_of([] { ModalTrace(cubic_profile, 1.0, Discretization{}, 0.0); }), ErrorCode::invalid_argument);
  Discretization fd;
  fd.scheme = Scheme::finite_difference;
  EXPECT_EQ(error_of([&] { ModalTrace(cubic_profile, 1.0, fd, 0.05); }), ErrorCode::invalid_argument);
}

TEST(ModalTrace, DerivativeGrowthStaysBelowTheSmoothingBound) {
  // sup_t |w^(n)| on [eps, 1] grows no faster than Gevrey order 3/2
  const Profile sine = [](double x) { return std::sin(std::numbers::pi * x); };
  for (double a : {0.0, 1.0}) {
    const ModalTrace mt(sine, a, Discretization{}, 0.05);
    std::vector<double> sup(13, 0.0);
    for (double t : linspace(0.05, 1.0, 40)) {
      const auto j = mt.jet(t, 12);
      for (int n = 0; n <= 12; ++n) sup[static_cast<std::size_t>(n)] = std::max(sup[n], std::abs(j.derivative(n)));
    }
    const auto fit = gevrey_fit(sup);
    EXPECT_LE(fit.s, 1.5 * 1.25) << "a=" << a;
  }
}

TEST(EnergyReport, ZeroData) {
  Discretization d;
  d.n_t = 20;
  const auto rep = energy_report(solve_free([](double) { return 0.0; }, 1.0, 1.0, d));
  EXPECT_EQ(rep.y0_l2, 0.0);
  EXPECT_EQ(rep.dissipation_integral, 0.0);
  EXPECT_EQ(rep.kato_ratio, 0.0);
  EXPECT_EQ(rep.smoothing_constant, 0.0);
}

TEST(EnergyReport, KatoBoundAndSmoothingConstantStability) {
  const Profile sine = [](double x) { return std::sin(std::numbers::pi * x); };
  for (double a : {0.0, 1.0, 4.0}) {
    Discretization coarse;
    coarse.n_t = 500;
    Discretization fine = coarse;
    fine.n_x *= 2;
    fine.n_t *= 2;
    const auto rc = energy_report(solve_free(sine, a, 1.0, coarse));
    const auto rf = energy_report(solve_free(sine, a, 1.0, fine));
    EXPECT_NEAR(rc.y0_l2, std::sqrt(0.5), 1e-6);  // y0'(0) != 0, so the projection is not exact
    EXPECT_DOUBLE_EQ(rc.kato_bound, (a + 1.0) / 3.0 * rc.y0_l2 * rc.y0_l2);
    EXPECT_LE(rc.kato_ratio, 1.05) << "a=" << a;
    EXPECT_LE(rc.max_step_growth, 1e-8) << "a=" << a;
    EXPECT_GT(rc.smoothing_constant, 0.0);
    EXPECT_NEAR(rf.smoothing_constant / rc.smoothing_constant, 1.0, 0.1) << "a=" << a;
  }
}

TEST(StateNorms, LegendreStatesAreExact) {
  Discretization d;
  d.n_t = 1;
  const auto traj = solve_free(cubic_profile, 0.0, 1e-12, d);
  // int_{-1}^0 x^4 (x+1)^2 dx = 1/105, int (3x^2 + 2x)^2 dx = 2/15
  EXPECT_NEAR(state_l2(traj, 0), std::sqrt(1.0 / 105.0), 1e-13);
  EXPECT_NEAR(state_dx_l2(traj, 0), std::sqrt(2.0 / 15.0), 1e-13);
}

}  // namespace
}  // namespace kdvflat
