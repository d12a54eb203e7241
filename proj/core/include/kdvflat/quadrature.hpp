#pragma once

#include <span>
#include <vector>

namespace kdvflat {

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [lo, hi].
GaussRule gauss_legendre(int n, double lo = -1.0, double hi = 1.0);

/// Composite rule: `panels` copies of the n-point rule on equal subintervals of [lo, hi].
GaussRule composite_gauss(int n, int panels, double lo, double hi);

/// sum_k c_k P_k(xi) and its d-th xi-derivative.
double legendre_eval(std::span<const double> c, double xi, int d = 0);

/// Legendre coefficients of d/dxi of sum_k c_k P_k.
std::vector<double> legendre_derivative(std::span<const double> c);

}  // namespace kdvflat
