#include "kdvflat/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "kdvflat/error.hpp"

namespace kdvflat {
namespace {

constexpr int kScanPoints = 512;

// Sign changes of f in [-1, 0], refined; endpoints included.
std::vector<double> breakpoints(const PolyFn& f) {
  std::vector<double> pts{-1.0};
  double x_prev = -1.0;
  double f_prev = f(x_prev);
  for (int k = 1; k <= kScanPoints; ++k) {
    const double x = -1.0 + static_cast<double>(k) / kScanPoints;
    const double fx = f(x);
    if (fx == 0.0) {
      pts.push_back(x);
    } else if (f_prev != 0.0 && (fx > 0.0) != (f_prev > 0.0)) {
      std::uintmax_t iters = 100;
      const auto r = boost::math::tools::toms748_solve([&f](double s) { return f(s); }, x_prev, x, f_prev, fx,
                                                       boost::math::tools::eps_tolerance<double>(52), iters);
      pts.push_back(0.5 * (r.first + r.second));
    }
    x_prev = x;
    f_prev = fx;
  }
  pts.push_back(0.0);
  return pts;
}

PolyFn antiderivative(const PolyFn& f) {
  const auto c = f.coeffs();
  std::vector<double> F(c.size() + 1, 0.0);
  for (std::size_t k = 0; k < c.size(); ++k) F[k + 1] = c[k] / static_cast<double>(k + 1);
  return PolyFn(std::move(F));
}

InequalityCheck finish(double lhs, double rhs) {
  InequalityCheck chk{lhs, rhs, lhs <= rhs * (1.0 + kLemmaSlack)};
  return chk;
}

// Cached |d^i f|_p and |P^i f|_p.
struct Norms {
  std::vector<double> deriv;  // i = 0..3 n_max
  std::vector<double> pow_p;  // i = 0..n_max

  Norms(const PolyFn& f, double a, int n_max, LpNorm p) {
    PolyFn g = f;
    for (int i = 0; i <= 3 * n_max; ++i) {
      deriv.push_back(lp_norm(g, p));
      g = g.derivative();
    }
    PolyFn h = f;
    for (int i = 0; i <= n_max; ++i) {
      pow_p.push_back(lp_norm(h, p));
      h = h.apply_P(a);
    }
  }
  double sobolev(int n) const {
    double s = 0.0;
    for (int i = 0; i <= n; ++i) s += deriv[static_cast<std::size_t>(i)];
    return s;
  }
  double sum_pow(int n) const {
    double s = 0.0;
    for (int i = 0; i <= n; ++i) s += pow_p[static_cast<std::size_t>(i)];
    return s;
  }
};

InequalityCheck derivative_bound_from(const Norms& nm, double a, int n) {
  return finish(nm.pow_p[static_cast<std::size_t>(n)], std::pow(1.0 + a, n) * nm.sobolev(3 * n));
}

InequalityCheck drift_bound_from(const Norms& nm, double a, int n) {
  return finish(nm.sum_pow(n) / ((1.0 + 1.0 / a) * std::pow(1.0 + a, n)), nm.sobolev(3 * n));
}

void require_n(int n) {
  if (n < 0) fail(ErrorCode::invalid_argument, "n must be >= 0");
}

}  // namespace

PolyFn::PolyFn(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  for (double c : coeffs_) {
    if (!std::isfinite(c)) fail(ErrorCode::invalid_argument, "polynomial coefficients must be finite");
  }
  while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
  if (coeffs_.empty()) coeffs_.push_back(0.0);
}

PolyFn PolyFn::derivative(int d) const {
  auto c = differentiate(coeffs_, d);
  const auto keep = std::max<std::ptrdiff_t>(1, static_cast<std::ptrdiff_t>(c.size()) - d);
  c.resize(static_cast<std::size_t>(keep));
  return PolyFn(std::move(c));
}

PolyFn PolyFn::apply_P(double a, int n) const { return PolyFn(kdvflat::apply_P(coeffs_, a, n)); }

double lp_norm(const PolyFn& f, LpNorm p) {
  switch (p) {
    case LpNorm::L2: {
      // int_{-1}^0 x^k dx = (-1)^k / (k + 1)
      const auto c = f.coeffs();
      double s = 0.0;
      for (std::size_t i = 0; i < c.size(); ++i) {
        for (std::size_t j = 0; j < c.size(); ++j) {
          const std::size_t k = i + j;
          s += c[i] * c[j] * ((k % 2 == 0) ? 1.0 : -1.0) / static_cast<double>(k + 1);
        }
      }
      return std::sqrt(std::max(s, 0.0));
    }
    case LpNorm::L1: {
      const auto pts = breakpoints(f);
      const PolyFn F = antiderivative(f);
      double s = 0.0;
      for (std::size_t k = 0; k + 1 < pts.size(); ++k) s += std::abs(F(pts[k + 1]) - F(pts[k]));
      return s;
    }
    case LpNorm::Linf: {
      double m = std::max(std::abs(f(-1.0)), std::abs(f(0.0)));
      for (double x : breakpoints(f.derivative())) m = std::max(m, std::abs(f(x)));
      return m;
    }
  }
  fail(ErrorCode::invalid_argument, "unknown L^p norm");
}

double sobolev_norm(const PolyFn& f, int n, LpNorm p) {
  require_n(n);
  double s = 0.0;
  PolyFn g = f;
  for (int i = 0; i <= n; ++i) {
    s += lp_norm(g, p);
    g = g.derivative();
  }
  return s;
}

InequalityCheck lemma21_check(const PolyFn& f, double a, int n, LpNorm p) {
  require_n(n);
  if (!(a >= 0.0)) fail(ErrorCode::invalid_argument, "a must be >= 0");
  return derivative_bound_from(Norms(f, a, n, p), a, n);
}

InequalityCheck lemma10_left_check(const PolyFn& f, double a, int n, LpNorm p) {
  require_n(n);
  if (a == 0.0) fail(ErrorCode::not_applicable, "the constant (1 + 1/a)^-1 is undefined for a = 0");
  if (!(a > 0.0)) fail(ErrorCode::invalid_argument, "a must be > 0");
  return drift_bound_from(Norms(f, a, n, p), a, n);
}

double lemma22_fit(std::span<const PolyFn> sample, double a, LpNorm p) {
  double c1 = 0.0;
  for (const auto& f : sample) {
    const double den = lp_norm(f, p) + lp_norm(f.apply_P(a), p);
    const double num = sobolev_norm(f, 3, p);
    if (den == 0.0) {
      if (num == 0.0) continue;
      fail(ErrorCode::fit, "|f|_p + |P f|_p vanishes for a nonzero f");
    }
    c1 = std::max(c1, num / den);
  }
  return c1;
}

double lemma10_right_fit(std::span<const PolyFn> sample, double a, int n, LpNorm p) {
  if (n < 1) fail(ErrorCode::invalid_argument, "right inequality fit needs n >= 1");
  double K = 0.0;
  for (const auto& f : sample) {
    const Norms nm(f, a, n, p);
    const double den = nm.sum_pow(n);
    if (den == 0.0) continue;
    K = std::max(K, std::pow(nm.sobolev(3 * n) / den, 1.0 / n));
  }
  return K;
}

PolyFn random_polynomial(int degree, std::uint64_t seed) {
  if (degree < 0) fail(ErrorCode::invalid_argument, "degree must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::vector<double> c(static_cast<std::size_t>(degree) + 1);
  for (double& v : c) v = coef(rng);
  return PolyFn(std::move(c));
}

PolyFn random_polynomial_isotropic(int degree, std::uint64_t seed) {
  if (degree < 0) fail(ErrorCode::invalid_argument, "degree must be >= 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  // shifted Legendre polynomials in x by (k+1) L_{k+1} = (2k+1)(2x+1) L_k - k L_{k-1}
  const auto n = static_cast<std::size_t>(degree) + 1;
  std::vector<double> prev;
  std::vector<double> cur{1.0};
  std::vector<double> c(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double g = gauss(rng) * std::sqrt(2.0 * static_cast<double>(k) + 1.0);
    for (std::size_t j = 0; j < cur.size(); ++j) c[j] += g * cur[j];
    std::vector<double> next(cur.size() + 1, 0.0);
    const double kk = static_cast<double>(k);
    for (std::size_t j = 0; j < cur.size(); ++j) {
      next[j] += (2 * kk + 1) * cur[j];
      next[j + 1] += 2 * (2 * kk + 1) * cur[j];
    }
    for (std::size_t j = 0; j < prev.size(); ++j) next[j] -= kk * prev[j];
    for (double& v : next) v /= kk + 1;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return PolyFn(std::move(c));
}

LemmaSweep lemma_sweep(int count, int degree, std::uint64_t seed, std::span<const double> a_values, int n_max) {
  require_n(n_max);
  LemmaSweep sw;
  std::mt19937_64 rng(seed);
  const LpNorm norms[] = {LpNorm::L1, LpNorm::L2, LpNorm::Linf};
  for (int k = 0; k < count; ++k) {
    const PolyFn f = random_polynomial(degree, rng());
    ++sw.polynomials;
    for (double a : a_values) {
      for (LpNorm p : norms) {
        const Norms nm(f, a, n_max, p);
        for (int n = 0; n <= n_max; ++n) {
          const auto c21 = derivative_bound_from(nm, a, n);
          ++sw.checks;
          if (!c21.pass) ++sw.lemma21_failures;
          if (c21.rhs > 0.0) sw.worst_lemma21_ratio = std::max(sw.worst_lemma21_ratio, c21.lhs / c21.rhs);
          if (a > 0.0) {
            const auto c10 = drift_bound_from(nm, a, n);
            ++sw.checks;
            if (!c10.pass) ++sw.lemma10_failures;
            if (c10.rhs > 0.0) sw.worst_lemma10_ratio = std::max(sw.worst_lemma10_ratio, c10.lhs / c10.rhs);
          }
        }
      }
    }
  }
  return sw;
}

}  // namespace kdvflat
