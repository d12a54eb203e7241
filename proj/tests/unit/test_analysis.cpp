#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "kdvflat/analysis.hpp"
#include "support.hpp"

namespace kdvflat {
namespace {

using test::error_of;

constexpr LpNorm kNorms[] = {LpNorm::L1, LpNorm::L2, LpNorm::Linf};

PolyFn monomial(int k) {
  std::vector<double> c(static_cast<std::size_t>(k) + 1, 0.0);
  c.back() = 1.0;
  return PolyFn(std::move(c));
}

TEST(PolyFn, DerivativeAndP) {
  const PolyFn f({1.0, 2.0, 3.0, 4.0});
  test::expect_coeffs(f.derivative().coeffs(), {2.0, 6.0, 12.0});
  test::expect_coeffs(f.derivative(3).coeffs(), {24.0});
  EXPECT_EQ(f.derivative(4).degree(), 0);
  EXPECT_EQ(f.derivative(4)(0.3), 0.0);
  // P f = 24 + a (2 + 6x + 12x^2)
  test::expect_coeffs(f.apply_P(0.5).coeffs(), {25.0, 3.0, 6.0});
  test::expect_coeffs(f.apply_P(0.0, 2).coeffs(), {0.0});
}

TEST(PolyFn, ApplyPLowersDegree) {
  for (int d = 0; d <= 9; ++d) {
    const auto f = random_polynomial(d, 11 + static_cast<std::uint64_t>(d));
    EXPECT_LE(f.apply_P(1.0).degree(), std::max(d - 1, 0));
    EXPECT_LE(f.apply_P(0.0).degree(), std::max(d - 3, 0));
  }
}

TEST(Norms, Examples) {
  const PolyFn x({0.0, 1.0});
  EXPECT_DOUBLE_EQ(sobolev_norm(x, 0, LpNorm::Linf), 1.0);
  EXPECT_DOUBLE_EQ(sobolev_norm(x, 1, LpNorm::Linf), 2.0);
  EXPECT_NEAR(sobolev_norm(monomial(2), 0, LpNorm::L2), 1.0 / std::sqrt(5.0), 1e-15);
  EXPECT_NEAR(lp_norm(x, LpNorm::L1), 0.5, 1e-15);
}

TEST(Norms, SignChangesAndInteriorExtrema) {
  // f = x + 1/2 changes sign at -1/2: L1 = 1/4, Linf = 1/2
  const PolyFn f({0.5, 1.0});
  EXPECT_NEAR(lp_norm(f, LpNorm::L1), 0.25, 1e-14);
  EXPECT_NEAR(lp_norm(f, LpNorm::Linf), 0.5, 1e-14);
  // f = x(x+1): interior minimum -1/4 at -1/2; L1 = 1/6
  const PolyFn g({0.0, 1.0, 1.0});
  EXPECT_NEAR(lp_norm(g, LpNorm::Linf), 0.25, 1e-14);
  EXPECT_NEAR(lp_norm(g, LpNorm::L1), 1.0 / 6.0, 1e-14);
  EXPECT_NEAR(lp_norm(g, LpNorm::L2), std::sqrt(1.0 / 30.0), 1e-14);
  // T_5 mapped to [-1, 0] equioscillates six times
  const PolyFn t5({1.0, 50.0, 400.0, 1120.0, 1280.0, 512.0});
  EXPECT_NEAR(lp_norm(t5, LpNorm::Linf), 1.0, 1e-12);
}

TEST(Norms, OrderingOnTheUnitInterval) {
  // |f|_1 <= |f|_2 <= |f|_inf on an interval of length one
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto f = random_polynomial(7, s);
    const double l1 = lp_norm(f, LpNorm::L1);
    const double l2 = lp_norm(f, LpNorm::L2);
    const double li = lp_norm(f, LpNorm::Linf);
    EXPECT_LE(l1, l2 * (1 + 1e-12));
    EXPECT_LE(l2, li * (1 + 1e-12));
  }
}

TEST(DerivativeNormBound, DepthZeroIsEquality) {
  const auto f = random_polynomial(6, 3);
  for (LpNorm p : kNorms) {
    const auto c = lemma21_check(f, 2.0, 0, p);
    EXPECT_DOUBLE_EQ(c.lhs, c.rhs);
    EXPECT_TRUE(c.pass);
  }
}

TEST(DerivativeNormBound, QuinticExample) {
  // P x^5 = 60 x^2 + 5 x^4 at a = 1; |x^5|_{3,inf} = 1 + 5 + 20 + 60
  const auto c = lemma21_check(monomial(5), 1.0, 1, LpNorm::Linf);
  EXPECT_NEAR(c.lhs, 65.0, 1e-12);
  EXPECT_NEAR(c.rhs, 2.0 * 86.0, 1e-12);
  EXPECT_TRUE(c.pass);
  EXPECT_NEAR(c.margin(), 107.0, 1e-12);
  const auto c2 = lemma21_check(monomial(5), 1.0, 1, LpNorm::L2);
  EXPECT_NEAR(c2.lhs, std::sqrt(720.0 + 600.0 / 7.0 + 25.0 / 9.0), 1e-12);
  EXPECT_TRUE(c2.pass);
}

TEST(DriftLowerBound, CubicExample) {
  // (1/2)(1/2)(|x^3|_inf + |6 + 3x^2|_inf) <= 1 + 3 + 6 + 6
  const auto c = lemma10_left_check(monomial(3), 1.0, 1, LpNorm::Linf);
  EXPECT_NEAR(c.lhs, 2.5, 1e-14);
  EXPECT_NEAR(c.rhs, 16.0, 1e-14);
  EXPECT_TRUE(c.pass);
}

TEST(DriftLowerBound, DepthZeroAndDriftFreeCase) {
  const auto f = random_polynomial(5, 8);
  for (double a : {0.5, 4.0}) {
    const auto c = lemma10_left_check(f, a, 0, LpNorm::L2);
    EXPECT_NEAR(c.lhs, lp_norm(f, LpNorm::L2) / (1.0 + 1.0 / a), 1e-14);
    EXPECT_TRUE(c.pass);
  }
  EXPECT_EQ(error_of([&] { lemma10_left_check(f, 0.0, 1, LpNorm::L2); }), ErrorCode::not_applicable);
  EXPECT_EQ(error_of([&] { lemma21_check(f, 1.0, -1, LpNorm::L2); }), ErrorCode::invalid_argument);
}

TEST(InequalitySweep, NoFailuresOnRandomPolynomials) {
  const double as[] = {0.5, 1.0, 4.0};
  const auto sw = lemma_sweep(300, 9, 2024, as, 3);
  EXPECT_EQ(sw.polynomials, 300);
  EXPECT_EQ(sw.checks, 300 * 3 * 3 * 4 * 2);
  EXPECT_EQ(sw.lemma21_failures, 0);
  EXPECT_EQ(sw.lemma10_failures, 0);
  EXPECT_LE(sw.worst_lemma21_ratio, 1.0 + kLemmaSlack);
  EXPECT_LE(sw.worst_lemma10_ratio, 1.0 + kLemmaSlack);
}

TEST(InequalitySweep, DriftFreeSweepSkipsTheLeftInequality) {
  const double as[] = {0.0};
  const auto sw = lemma_sweep(10, 5, 1, as, 2);
  EXPECT_EQ(sw.checks, 10 * 3 * 3);
  EXPECT_EQ(sw.lemma21_failures, 0);
}

TEST(RandomPolynomial, Deterministic) {
  EXPECT_EQ(random_polynomial(4, 99).coeffs()[2], random_polynomial(4, 99).coeffs()[2]);
  EXPECT_EQ(random_polynomial_isotropic(4, 99)(-0.3), random_polynomial_isotropic(4, 99)(-0.3));
  EXPECT_EQ(error_of([] { random_polynomial(-1, 0); }), ErrorCode::invalid_argument);
}

TEST(RandomPolynomial, IsotropicSamplesHaveUnitVariancePerDirection) {
  // E |f|_2^2 = degree + 1 for standard normal coordinates in an orthonormal basis
  const int degree = 5;
  double sum = 0.0;
  const int count = 4000;
  for (int k = 0; k < count; ++k) {
    const double l2 = lp_norm(random_polynomial_isotropic(degree, static_cast<std::uint64_t>(k)), LpNorm::L2);
    sum += l2 * l2;
  }
  EXPECT_NEAR(sum / count, degree + 1.0, 0.05 * (degree + 1.0));
}

std::vector<PolyFn> isotropic_sample(int count, int degree, std::uint64_t seed) {
  std::vector<PolyFn> s;
  for (int k = 0; k < count; ++k) s.push_back(random_polynomial_isotropic(degree, seed + static_cast<std::uint64_t>(k)));
  return s;
}

TEST(NormEquivalenceFit, Examples) {
  const std::vector<PolyFn> one{monomial(2)};
  const double c = lemma22_fit(one, 1.0, LpNorm::Linf);
  // |x^2|_{3,inf} = 1 + 2 + 2, |x^2|_inf + |2x|_inf = 3
  EXPECT_NEAR(c, 5.0 / 3.0, 1e-14);
  EXPECT_EQ(lemma22_fit({}, 1.0, LpNorm::L2), 0.0);
}

TEST(NormEquivalenceFit, NeverDecreasesWhenTheSampleGrows) {
  auto sample = isotropic_sample(40, 6, 5);
  double prev = 0.0;
  for (std::size_t n = 1; n <= sample.size(); ++n) {
    const double c = lemma22_fit(std::span(sample).first(n), 4.0, LpNorm::L1);
    EXPECT_GE(c, prev);
    prev = c;
  }
}

TEST(NormEquivalenceFit, StableUnderSampleDoubling) {
  const auto big = isotropic_sample(2000, 6, 777);
  const auto half = std::span(big).first(1000);
  for (double a : {0.5, 1.0, 4.0}) {
    for (LpNorm p : kNorms) {
      const double c1 = lemma22_fit(half, a, p);
      const double c2 = lemma22_fit(big, a, p);
      EXPECT_LE(c2 / c1, 1.10) << "a=" << a << " p=" << static_cast<int>(p);
    }
  }
}

TEST(DriftUpperFit, FiniteAndPositive) {
  const auto sample = isotropic_sample(200, 9, 3);
  for (double a : {0.5, 1.0, 4.0}) {
    for (int n = 1; n <= 3; ++n) {
      const double K = lemma10_right_fit(sample, a, n, LpNorm::L2);
      EXPECT_TRUE(std::isfinite(K));
      EXPECT_GT(K, 0.0);
    }
  }
  EXPECT_EQ(error_of([&] { lemma10_right_fit(sample, 1.0, 0, LpNorm::L2); }), ErrorCode::invalid_argument);
}

}  // namespace
}  // namespace kdvflat
