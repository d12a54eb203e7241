#pragma once

// Airy function by its Taylor series at 0, the fundamental solution
// E(x, t) = (3t)^(-1/3) Ai(x / (3t)^(1/3)) of y_t + y_xxx = 0 on the line, and
// convolution solutions E(., t) * y0 for compactly supported y0.

#include <span>
#include <vector>

#include "kdvflat/trajectory.hpp"

namespace kdvflat {

struct AiryTable {
  int n_max = 0;
  std::vector<double> derivs;  ///< derivs[n] = Ai^(n)(0), n = 0..n_max
  double x_max = 6.0;          ///< evaluation window |x| <= x_max
};

/// Builds Ai^(n)(0) from the seeds Ai(0) = 1/(3^(2/3) Gamma(2/3)), Ai'(0) = -1/(3^(1/3) Gamma(1/3)),
/// Ai''(0) = 0 and Ai^(k+3)(0) = (k+1) Ai^(k)(0).
AiryTable build_airy_table(int n_max = 120, double x_max = 6.0);

/// Shared default table (n_max = 120, x_max = 6).
const AiryTable& default_airy_table();

/// Largest derivative order airy_eval accepts for a table.
int airy_max_derivative(const AiryTable& table);

/// Ai^(d)(x) by Taylor summation. Throws ErrorCode::domain for |x| > x_max and
/// ErrorCode::invalid_argument for d > airy_max_derivative(table).
double airy_eval(double x, int d = 0, const AiryTable& table = default_airy_table());

/// max |Ai''(x) - x Ai(x)| over the samples.
double airy_ode_check(std::span<const double> xs, const AiryTable& table = default_airy_table());

struct AiryEnvelope {
  double C2 = 0.0;      ///< max_n |Ai^(n)(0)| / ((n+1)!)^(1/3)
  double C3 = 0.0;      ///< max_n |Ai^(n)(0)| R^n / (n!)^(1/3)
  int C3_argmax = 0;
  double R = 0.0;
  double tail_ratio = 0.0;  ///< |Ai^(n_max)(0)| R^n_max / (n_max!)^(1/3) divided by C3
};

/// Envelope constants of |Ai^(n)(0)| <= C2 ((n+1)!)^(1/3) <= C3 (n!)^(1/3) / R^n.
AiryEnvelope airy_envelope(const AiryTable& table, double R);

/// d_x^p E(x, t). Throws ErrorCode::domain for t <= 0 or a scaled argument outside the window.
double fundamental_solution(double x, double t, int p = 0, const AiryTable& table = default_airy_table());

/// d_t E(x, t) via the chain rule.
double fundamental_solution_dt(double x, double t, const AiryTable& table = default_airy_table());

/// |d_t E + d_x^3 E| at (x, t).
double fundamental_pde_defect(double x, double t, const AiryTable& table = default_airy_table());

struct AiryMass {
  double window = 0.0;           ///< int_{-x_max}^{x_max} Ai by quadrature
  double mass = 0.0;             ///< window plus the left tail from integration by parts
  double remainder_bound = 0.0;  ///< bound on what both tails leave out
};

/// int Ai over the line (equal to int E(x, t) dx for every t > 0). The left tail is
/// closed with the Airy equation, not an asymptotic expansion.
AiryMass airy_mass(int nodes = 16, const AiryTable& table = default_airy_table());

struct LineQuadrature {
  int nodes = 64;
  int panels = 1;
};

/// d_x^p of int_{-L}^{L} E(x - s, t) y0(s) ds by composite Gauss-Legendre. Throws
/// ErrorCode::domain when (|x| + L) / (3t)^(1/3) leaves the window.
double line_solution(const Profile& y0, double L, double x, double t, int p = 0, LineQuadrature quad = {},
                     const AiryTable& table = default_airy_table());

/// sup over x in [x_lo, x_hi] (n_x samples) of |d_x^p y(x, t)| for p = 0..p_max.
std::vector<double> line_derivative_sup(const Profile& y0, double L, double x_lo, double x_hi, int n_x, double t,
                                        int p_max, LineQuadrature quad = {},
                                        const AiryTable& table = default_airy_table());

}  // namespace kdvflat
