#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "kdvflat/flatout.hpp"
#include "kdvflat/genfun.hpp"
#include "support.hpp"

namespace kdvflat {
namespace {

using test::error_of;

bool is_constant_jet(const Jet& j, double v) {
  for (int k = 0; k <= j.order(); ++k) {
    if (j.coeff(k) != (k == 0 ? v : 0.0)) return false;
  }
  return true;
}

TEST(StepPhi, Plateaus) {
  const StepParams p{2.0, 1.0, 0.5, 1.0};
  EXPECT_TRUE(is_constant_jet(step_phi(p, -0.2, 8), 1.0));
  EXPECT_TRUE(is_constant_jet(step_phi(p, 0.0, 8), 1.0));
  EXPECT_TRUE(is_constant_jet(step_phi(p, 1.0, 8), 0.0));
  EXPECT_TRUE(is_constant_jet(step_phi(p, 1.7, 8), 0.0));
  EXPECT_TRUE(is_constant_jet(step_phi(p, 0.5e-12, 8), 1.0));
  EXPECT_TRUE(is_constant_jet(step_phi(p, 1.0 - 0.5e-12, 8), 0.0));
}

TEST(StepPhi, MidpointAndMonotone) {
  for (double s : {1.5, 2.0, 2.9}) {
    const StepParams p{s, 1.0, 0.5, 1.0};
    EXPECT_EQ(step_phi(p, 0.5, 4).value(), 0.5);
  }
  const StepParams p{2.0, 1.0, 0.5, 1.0};
  const double v = step_phi(p, 0.25, 0).value();
  EXPECT_GT(v, 0.0);
  EXPECT_LT(v, 1.0);
  double prev = 1.0;
  for (int k = 0; k <= 1000; ++k) {
    const double cur = step_phi(p, k / 1000.0, 0).value();
    EXPECT_LE(cur, prev);
    prev = cur;
  }
}

TEST(StepPhi, SymmetryAboutMidpoint) {
  const StepParams p{2.0, 1.0, 0.5, 1.0};
  for (double rho : {0.1, 0.3, 0.45}) {
    const auto l = step_phi(p, rho, 6);
    const auto r = step_phi(p, 1.0 - rho, 6);
    EXPECT_NEAR(l.value() + r.value(), 1.0, 1e-15);
    for (int k = 1; k <= 6; ++k) EXPECT_NEAR(l.coeff(k), (k % 2 == 0 ? -1.0 : 1.0) * r.coeff(k), 1e-9 * (1 + std::abs(l.coeff(k))));
  }
}

TEST(StepPhi, GluingLimits) {
  const StepParams p{2.0, 1.0, 0.5, 1.0};
  for (double rho : {0.005, 0.995}) {
    const auto j = step_phi(p, rho, 10);
    const double plateau = rho < 0.5 ? 1.0 : 0.0;
    for (int k = 0; k <= 10; ++k) EXPECT_NEAR(j.derivative(k), k == 0 ? plateau : 0.0, 1e-10) << "rho=" << rho << " k=" << k;
  }
}

TEST(StepPhi, DerivativesMatchFiniteDifferences) {
  const StepParams p{2.0, 1.0, 0.5, 1.0};
  const double rho = 0.37;
  const double h = 1e-5;
  const auto j = step_phi(p, rho, 2);
  const double fd = (step_phi(p, rho + h, 0).value() - step_phi(p, rho - h, 0).value()) / (2 * h);
  EXPECT_NEAR(j.derivative(1), fd, 1e-8);
}

TEST(StepPhi, TimeReparameterization) {
  const StepParams p{2.0, 1.0, 0.5, 1.0};
  const auto jt = step_phi_time(p, 0.8, 5);
  const auto jr = step_phi(p, 0.6, 5);
  EXPECT_DOUBLE_EQ(jt.t0(), 0.8);
  for (int k = 0; k <= 5; ++k) EXPECT_NEAR(jt.coeff(k), jr.coeff(k) * std::pow(2.0, k), 1e-12 * (1 + std::abs(jt.coeff(k))));
}

TEST(StepParams, Validation) {
  EXPECT_EQ(error_of([] { StepParams{2.0, 1.0, 1.0, 1.0}.validate(); }), ErrorCode::invalid_argument);
  EXPECT_EQ(error_of([] { StepParams{2.0, 0.0, 0.5, 1.0}.validate(); }), ErrorCode::invalid_argument);
  EXPECT_EQ(error_of([] { StepParams{1.0, 1.0, 0.5, 1.0}.validate(); }), ErrorCode::invalid_argument);
  EXPECT_DOUBLE_EQ((StepParams{1.5, 1.0, 0.5, 1.0}.sigma()), 2.0);
}

TEST(BumpG, Examples) {
  EXPECT_TRUE(is_constant_jet(bump_g(0.5, 1.0, 1.0, 6), 1.0));
  EXPECT_TRUE(is_constant_jet(bump_g(0.5, 1.0, 0.3, 6), 0.0));
  EXPECT_TRUE(is_constant_jet(bump_g(0.5, 1.0, 0.5, 6), 0.0));
  EXPECT_DOUBLE_EQ(bump_g(0.5, 1.0, 0.75, 3).value(), 0.5);
  EXPECT_EQ(error_of([] { bump_g(1.0, 1.0, 0.5, 3); }), ErrorCode::invalid_argument);
}

TEST(ExtractB, Examples) {
  const auto bx2 = extract_b(std::vector<double>{0, 0, 1}, 0.0, 3);
  ASSERT_EQ(bx2.size(), 4u);
  EXPECT_DOUBLE_EQ(bx2[0], 2.0);
  for (int n = 1; n <= 3; ++n) EXPECT_EQ(bx2[static_cast<std::size_t>(n)], 0.0);

  const auto bx5 = extract_b(std::vector<double>{0, 0, 0, 0, 0, 1}, 0.0, 2);
  EXPECT_DOUBLE_EQ(bx5[0], 0.0);
  EXPECT_DOUBLE_EQ(bx5[1], -120.0);

  std::vector<double> fig1(21, 0.0);
  for (int n = 0; n <= 6; ++n) fig1[static_cast<std::size_t>(3 * n + 2)] = 3.0 / std::tgamma(3.0 * n + 3.0);
  const auto b = extract_b(fig1, 0.0, 6);
  for (int n = 0; n <= 6; ++n) EXPECT_NEAR(b[static_cast<std::size_t>(n)], n % 2 == 0 ? 3.0 : -3.0, 1e-12);
}

TEST(ExtractB, RoundTripPinsSign) {
  const auto t = build_table(0.0, 4);
  const std::vector<double> x5{0, 0, 0, 0, 0, 1};
  const auto b = extract_b(x5, 0.0, 2);
  const auto back = synthesize_from_b(t, b);
  for (std::size_t k = 0; k < back.size(); ++k) EXPECT_NEAR(back[k], k < x5.size() ? x5[k] : 0.0, 1e-12);
  // Without the (-1)^n factor the x^5 coefficient comes out as -1.
  const std::vector<double> unsigned_b{b[0], -b[1], b[2]};
  EXPECT_NEAR(synthesize_from_b(t, unsigned_b)[5], -1.0, 1e-12);
}

TEST(ExtractB, RoundTripWithDrift) {
  const auto t = build_table(0.25, 8);
  const std::vector<double> b{0.7, -0.2, 1.1, 0.4};
  const auto y1 = synthesize_from_b(t, b);
  const auto back = extract_b(y1, 0.25, 3);
  for (int n = 0; n <= 3; ++n) EXPECT_NEAR(back[static_cast<std::size_t>(n)], b[static_cast<std::size_t>(n)], 1e-12);
}

TEST(ExtractB, TruncatedDriftSeriesIsTakenLiterally) {
  // the dropped tail of sum b_n g_n breaks the conditions at high n once a > 1
  const auto t = build_table(1.5, 8);
  const std::vector<double> b{0.7, -0.2, 1.1, 0.4};
  const auto y1 = synthesize_from_b(t, b);
  EXPECT_EQ(error_of([&] { extract_b(y1, 1.5, 3); }), ErrorCode::not_reachable);
}

TEST(ExtractB, RejectsUnreachableTargets) {
  EXPECT_EQ(error_of([] { extract_b(std::vector<double>{1.0}, 0.0, 2); }), ErrorCode::not_reachable);
  EXPECT_EQ(error_of([] { extract_b(std::vector<double>{0, 1.0}, 0.0, 2); }), ErrorCode::not_reachable);
  // x^3: P x^3 = 6 is nonzero at 0
  EXPECT_EQ(error_of([] { extract_b(std::vector<double>{0, 0, 0, 1.0}, 0.0, 2); }), ErrorCode::not_reachable);
  // x^2 with drift: d_x P x^2 = 2a at 0
  EXPECT_EQ(error_of([] { extract_b(std::vector<double>{0, 0, 1.0}, 1.0, 2); }), ErrorCode::not_reachable);
}

TEST(FlatOutputReach, Examples) {
  const double one[] = {1.0};
  const auto z1 = flat_output_reach(one, 0.5, 1.0, 4);
  EXPECT_DOUBLE_EQ(z1.jet(1.0, 4).value(), 1.0);
  EXPECT_DOUBLE_EQ(z1.jet(1.0, 4).derivative(1), 0.0);
  EXPECT_DOUBLE_EQ(z1.jet(0.0, 4).value(), 0.0);

  const double zero[] = {0.0, 0.0, 0.0};
  const auto z0 = flat_output_reach(zero, 0.5, 1.0, 4);
  for (double t : {0.0, 0.6, 0.9, 1.0}) EXPECT_EQ(z0.jet(t, 4).value(), 0.0);

  const double b[] = {3.0, -3.0, 3.0};
  const auto z = flat_output_reach(b, 0.5, 1.0, 8);
  const auto d = z.jet(1.0, 8).derivatives();
  for (int i = 0; i <= 8; ++i) EXPECT_NEAR(d[static_cast<std::size_t>(i)], i < 3 ? b[i] : 0.0, 1e-12);
  const auto d0 = z.jet(0.0, 8).derivatives();
  for (double v : d0) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(z.kind(), FlatKind::reach);
  EXPECT_EQ(error_of([&] { flat_output_reach(b, 0.5, 1.0, 2); }), ErrorCode::depth);
  EXPECT_EQ(error_of([&] { z.jet(0.7, 9); }), ErrorCode::depth);
}

TEST(FlatOutputNull, PlateausAndUnitTrace) {
  const StepParams p{2.0, 1.0, 0.5, 1.0};
  TraceSource unit{[](double t, int d) { return Jet(t, d, 1.0); }, 0.0, 1.0};
  const auto z = flat_output_null(unit, p, 6);
  for (double t : {0.55, 0.7, 0.9}) {
    const auto zj = z.jet(t, 6);
    const auto pj = step_phi_time(p, t, 6);
    for (int k = 0; k <= 6; ++k) EXPECT_DOUBLE_EQ(zj.coeff(k), pj.coeff(k));
  }
  EXPECT_TRUE(is_constant_jet(z.jet(1.0, 6), 0.0));

  TraceSource wavy{[](double t, int d) { return jet_sin(jet_var(t, d)); }, 0.0, 1.0};
  const auto zw = flat_output_null(wavy, p, 6);
  const auto wj = jet_sin(jet_var(0.3, 6));
  const auto zj = zw.jet(0.3, 6);
  for (int k = 0; k <= 6; ++k) EXPECT_EQ(zj.coeff(k), wj.coeff(k));
}

TEST(FlatOutputNull, RequiresCoverage) {
  const StepParams p{2.0, 1.0, 0.5, 1.0};
  TraceSource late{[](double t, int d) { return Jet(t, d, 1.0); }, 0.6, 1.0};
  EXPECT_EQ(error_of([&] { flat_output_null(late, p, 4); }), ErrorCode::invalid_argument);
  TraceSource shorter{[](double t, int d) { return Jet(t, d, 1.0); }, 0.0, 0.9};
  EXPECT_EQ(error_of([&] { flat_output_null(shorter, p, 4); }), ErrorCode::invalid_argument);
}

TEST(GevreyFit, Examples) {
  std::vector<double> ex(16, std::exp(1.0));
  const auto fe = gevrey_fit(ex);
  EXPECT_NEAR(fe.s, 0.0, 0.15);
  EXPECT_NEAR(fe.R, 1.0, 0.15);

  std::vector<double> poly{1.0, 3.0, 6.0, 6.0, 0, 0, 0, 0, 0, 0};
  EXPECT_TRUE(gevrey_fit(poly).finite_support);

  std::vector<double> zero(10, 0.0);
  EXPECT_EQ(error_of([&] { gevrey_fit(zero); }), ErrorCode::fit);
  std::vector<double> few(5, 1.0);
  EXPECT_EQ(error_of([&] { gevrey_fit(few); }), ErrorCode::fit);
}

TEST(GevreyFit, RecoversSyntheticOrder) {
  std::vector<double> m;
  for (int i = 0; i <= 20; ++i) m.push_back(2.0 * std::exp(1.5 * std::lgamma(i + 1.0)) / std::pow(0.7, i));
  const auto f = gevrey_fit(m);
  EXPECT_NEAR(f.s, 1.5, 1e-8);
  EXPECT_NEAR(f.R, 0.7, 1e-8);
  EXPECT_NEAR(f.C, 2.0, 1e-6);
}

TEST(GevreyFit, StepFunctionOrder) {
  const StepParams p{2.0, 1.0, 0.5, 1.0};
  std::vector<double> sup(25, 0.0);
  for (int k = 1; k < 1000; ++k) {
    const auto d = step_phi(p, k / 1000.0, 24).derivatives();
    for (std::size_t i = 0; i < sup.size(); ++i) sup[i] = std::max(sup[i], std::abs(d[i]));
  }
  const auto f = gevrey_fit(sup);
  EXPECT_GE(f.s, 1.8);
  EXPECT_LE(f.s, 2.2);
}

TEST(FitEnvelope, BoundsEverySample) {
  std::vector<double> m{1.0, 3.0, 20.0, 90.0, 800.0, 5000.0};
  const auto env = fit_envelope(m, 2.0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double bound = env.M_env * std::exp(2.0 * std::lgamma(i + 1.0)) / std::pow(env.R_env, static_cast<double>(i));
    EXPECT_LE(m[i], bound * (1 + 1e-12));
  }
  EXPECT_EQ(fit_envelope(std::vector<double>(4, 0.0), 2.0).M_env, 0.0);
}

}  // namespace
}  // namespace kdvflat
