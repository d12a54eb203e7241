#pragma once

// Norm inequalities for P = d^3/dx^3 + a d/dx on polynomials over [-1, 0]:
//   |P^n f|_p <= (1+a)^n |f|_{3n,p}                                   lemma21_check
//   (1+1/a)^-1 (1+a)^-n sum_{i<=n} |P^i f|_p <= |f|_{3n,p}, a > 0      lemma10_left_check
//   |f|_{3,p} <= C1 (|f|_p + |P f|_p)                                  lemma22_fit
// with |f|_{n,p} = sum_{i<=n} |d^i f|_{L^p(-1,0)}.

#include <cstdint>
#include <span>
#include <vector>

#include "kdvflat/genfun.hpp"

namespace kdvflat {

/// Polynomial on [-1, 0] by its monomial coefficients about 0 (trailing zeros dropped).
class PolyFn {
 public:
  explicit PolyFn(std::vector<double> coeffs);

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  double operator()(double x) const { return eval_series(coeffs_, x); }

  PolyFn derivative(int d = 1) const;
  /// P^n f.
  PolyFn apply_P(double a, int n = 1) const;

 private:
  std::vector<double> coeffs_;
};

enum class LpNorm { L1, L2, Linf };

/// L^p(-1, 0) norm. L2 exactly; L1 and Linf from the sign changes of f and f' (bracketed
/// on a dense grid and refined).
double lp_norm(const PolyFn& f, LpNorm p);

/// sum_{i<=n} |d^i f|_p.
double sobolev_norm(const PolyFn& f, int n, LpNorm p);

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = true;
  double margin() const { return rhs - lhs; }
};

/// Relative floating-point slack allowed on both lemma checks.
inline constexpr double kLemmaSlack = 1e-12;

InequalityCheck lemma21_check(const PolyFn& f, double a, int n, LpNorm p);

/// Throws ErrorCode::not_applicable for a == 0.
InequalityCheck lemma10_left_check(const PolyFn& f, double a, int n, LpNorm p);

/// Smallest C1 with |f|_{3,p} <= C1 (|f|_p + |P f|_p) over the sample (0 for an empty sample).
double lemma22_fit(std::span<const PolyFn> sample, double a, LpNorm p);

/// Smallest K with |f|_{3n,p} <= K^n sum_{i<=n} |P^i f|_p over the sample (n >= 1).
double lemma10_right_fit(std::span<const PolyFn> sample, double a, int n, LpNorm p);

/// Polynomial of the given degree with coefficients uniform in [-1, 1].
PolyFn random_polynomial(int degree, std::uint64_t seed);

/// Polynomial with independent standard normal coordinates in the L2(-1, 0)-orthonormal
/// Legendre basis; its direction is uniform on the unit sphere of that space.
PolyFn random_polynomial_isotropic(int degree, std::uint64_t seed);

struct LemmaSweep {
  int polynomials = 0;
  int checks = 0;
  int lemma21_failures = 0;
  int lemma10_failures = 0;
  double worst_lemma21_ratio = 0.0;  ///< max lhs / rhs
  double worst_lemma10_ratio = 0.0;
};

/// Runs both lemma checks on `count` random polynomials for every a, n <= n_max and p.
LemmaSweep lemma_sweep(int count, int degree, std::uint64_t seed, std::span<const double> a_values, int n_max);

}  // namespace kdvflat
