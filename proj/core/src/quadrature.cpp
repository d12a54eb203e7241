#include "kdvflat/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "kdvflat/error.hpp"

namespace kdvflat {

GaussRule gauss_legendre(int n, double lo, double hi) {
  if (n < 1) fail(ErrorCode::invalid_argument, "Gauss rule needs n >= 1");
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo_i = static_cast<std::size_t>(i);
    const auto hi_i = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo_i] = mid - half * x;
    rule.nodes[hi_i] = mid + half * x;
    rule.weights[lo_i] = half * w;
    rule.weights[hi_i] = half * w;
  }
  return rule;
}

GaussRule composite_gauss(int n, int panels, double lo, double hi) {
  if (panels < 1) fail(ErrorCode::invalid_argument, "composite rule needs at least one panel");
  GaussRule rule;
  const double h = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const auto part = gauss_legendre(n, lo + p * h, lo + (p + 1) * h);
    rule.nodes.insert(rule.nodes.end(), part.nodes.begin(), part.nodes.end());
    rule.weights.insert(rule.weights.end(), part.weights.begin(), part.weights.end());
  }
  return rule;
}

std::vector<double> legendre_derivative(std::span<const double> c) {
  const auto n = c.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  // d_{k-1} / (2k - 1) = c_k + d_{k+1} / (2k + 3)
  double next = 0.0;  // d_{k+1} / (2k + 3)
  double next2 = 0.0;
  for (std::size_t k = n - 1; k >= 1; --k) {
    const double scaled = c[k] + next2;
    d[k - 1] = (2.0 * static_cast<double>(k) - 1.0) * scaled;
    next2 = next;
    next = scaled;
  }
  return d;
}

double legendre_eval(std::span<const double> c, double xi, int d) {
  std::vector<double> cur(c.begin(), c.end());
  for (int r = 0; r < d; ++r) cur = legendre_derivative(cur);
  // Clenshaw for P_{k+1} = ((2k+1) x P_k - k P_{k-1}) / (k+1)
  double b1 = 0.0;
  double b2 = 0.0;
  for (std::size_t k = cur.size(); k-- > 0;) {
    const double kk = static_cast<double>(k);
    const double alpha = (2.0 * kk + 1.0) / (kk + 1.0) * xi;
    const double beta = -(kk + 1.0) / (kk + 2.0);
    const double b0 = cur[k] + alpha * b1 + beta * b2;
    b2 = b1;
    b1 = b0;
  }
  return b1;
}

}  // namespace kdvflat
