#include "kdvflat/airy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "kdvflat/error.hpp"
#include "kdvflat/quadrature.hpp"

namespace kdvflat {
namespace {

constexpr int kMinTable = 12;
// Bound on |Ai| over the real line, used for the integration-by-parts remainder.
constexpr double kAiSup = 0.5357;

double scaled_arg(double x, double t, const AiryTable& table) {
  if (!(t > 0.0)) fail(ErrorCode::domain, "fundamental solution needs t > 0");
  const double s = std::cbrt(3.0 * t);
  const double xi = x / s;
  if (std::abs(xi) > table.x_max) {
    fail(ErrorCode::domain, "scaled argument " + std::to_string(xi) + " outside the Airy window");
  }
  return xi;
}

}  // namespace

AiryTable build_airy_table(int n_max, double x_max) {
  if (n_max < kMinTable) fail(ErrorCode::invalid_argument, "Airy table needs n_max >= " + std::to_string(kMinTable));
  if (!(x_max > 0.0)) fail(ErrorCode::invalid_argument, "Airy window must be positive");
  const double g13 = std::tgamma(1.0 / 3.0);
  const double g23 = std::tgamma(2.0 / 3.0);
  const double reflection = 2.0 * std::numbers::pi / std::sqrt(3.0);
  if (std::abs(g13 * g23 - reflection) > 1e-14 * reflection) {
    fail(ErrorCode::range, "Gamma(1/3) Gamma(2/3) fails the reflection identity");
  }
  AiryTable table;
  table.n_max = n_max;
  table.x_max = x_max;
  table.derivs.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
  table.derivs[0] = 1.0 / (std::cbrt(9.0) * g23);
  table.derivs[1] = -1.0 / (std::cbrt(3.0) * g13);
  table.derivs[2] = 0.0;
  for (int k = 0; k + 3 <= n_max; ++k) {
    table.derivs[static_cast<std::size_t>(k + 3)] = (k + 1.0) * table.derivs[static_cast<std::size_t>(k)];
  }
  return table;
}

const AiryTable& default_airy_table() {
  static const AiryTable table = build_airy_table();
  return table;
}

int airy_max_derivative(const AiryTable& table) { return table.n_max / 3; }

double airy_eval(double x, int d, const AiryTable& table) {
  if (std::abs(x) > table.x_max) fail(ErrorCode::domain, "|x| exceeds the Airy Taylor window");
  if (d < 0 || d > airy_max_derivative(table)) {
    fail(ErrorCode::invalid_argument, "Airy derivative order " + std::to_string(d) + " not supported by the table");
  }
  // sum_n Ai^(n+d)(0) x^n / n!, Horner with running factorial
  const int terms = table.n_max - d;
  double acc = 0.0;
  for (int n = terms; n >= 0; --n) {
    acc = table.derivs[static_cast<std::size_t>(n + d)] + acc * x / (n + 1.0);
  }
  return acc;
}

double airy_ode_check(std::span<const double> xs, const AiryTable& table) {
  double worst = 0.0;
  for (double x : xs) worst = std::max(worst, std::abs(airy_eval(x, 2, table) - x * airy_eval(x, 0, table)));
  return worst;
}

AiryEnvelope airy_envelope(const AiryTable& table, double R) {
  if (!(R > 0.0 && R < 1.0)) fail(ErrorCode::invalid_argument, "Airy envelope radius must lie in (0, 1)");
  AiryEnvelope env;
  env.R = R;
  double last = 0.0;
  for (int n = 0; n <= table.n_max; ++n) {
    const double m = std::abs(table.derivs[static_cast<std::size_t>(n)]);
    if (m == 0.0) continue;
    const double lm = std::log(m);
    env.C2 = std::max(env.C2, std::exp(lm - std::lgamma(n + 2.0) / 3.0));
    const double c3 = std::exp(lm + n * std::log(R) - std::lgamma(n + 1.0) / 3.0);
    if (c3 > env.C3) {
      env.C3 = c3;
      env.C3_argmax = n;
    }
    last = c3;
  }
  env.tail_ratio = env.C3 > 0.0 ? last / env.C3 : 0.0;
  return env;
}

double fundamental_solution(double x, double t, int p, const AiryTable& table) {
  const double xi = scaled_arg(x, t, table);
  const double s = std::cbrt(3.0 * t);
  return std::pow(s, -(1.0 + p)) * airy_eval(xi, p, table);
}

double fundamental_solution_dt(double x, double t, const AiryTable& table) {
  // E = s^-1 Ai(x/s), s = (3t)^(1/3), ds/dt = s^-2
  const double xi = scaled_arg(x, t, table);
  const double s = std::cbrt(3.0 * t);
  const double s4 = s * s * s * s;
  return -(airy_eval(xi, 0, table) + xi * airy_eval(xi, 1, table)) / s4;
}

double fundamental_pde_defect(double x, double t, const AiryTable& table) {
  return std::abs(fundamental_solution_dt(x, t, table) + fundamental_solution(x, t, 3, table));
}

AiryMass airy_mass(int nodes, const AiryTable& table) {
  // int_{-X}^{X} Ai by quadrature. Left tail from Ai = Ai''/x integrated by parts:
  //   int_{-inf}^{-X} Ai = -Ai'(-X)/X + Ai(-X)/X^2 + 2 Ai'(-X)/X^4 - 8 Ai(-X)/X^5 + 40 int Ai/x^6
  const double X = table.x_max;
  const auto rule = composite_gauss(nodes, static_cast<int>(std::ceil(2.0 * X)), -X, X);
  double core = 0.0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) core += rule.weights[q] * airy_eval(rule.nodes[q], 0, table);
  const double a0 = airy_eval(-X, 0, table);
  const double a1 = airy_eval(-X, 1, table);
  const double X2 = X * X;
  const double X4 = X2 * X2;
  const double left = -a1 / X + a0 / X2 + 2.0 * a1 / X4 - 8.0 * a0 / (X4 * X);
  AiryMass m;
  m.window = core;
  m.mass = core + left;
  // 40 sup|Ai| / (5 X^5), plus int_X^inf Ai <= Ai(X) / sqrt(X)
  m.remainder_bound = 8.0 * kAiSup / (X4 * X) + airy_eval(X, 0, table) / std::sqrt(X);
  return m;
}

double line_solution(const Profile& y0, double L, double x, double t, int p, LineQuadrature quad,
                     const AiryTable& table) {
  if (!y0) fail(ErrorCode::invalid_argument, "missing initial profile");
  if (!(L > 0.0)) fail(ErrorCode::invalid_argument, "support half-width L must be > 0");
  if (!(t > 0.0)) fail(ErrorCode::domain, "line solution needs t > 0");
  if ((std::abs(x) + L) / std::cbrt(3.0 * t) > table.x_max) {
    fail(ErrorCode::domain, "(|x| + L) / (3t)^(1/3) leaves the Airy window");
  }
  const auto rule = composite_gauss(quad.nodes, quad.panels, -L, L);
  double s = 0.0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double f = y0(rule.nodes[q]);
    if (f == 0.0) continue;
    s += rule.weights[q] * f * fundamental_solution(x - rule.nodes[q], t, p, table);
  }
  return s;
}

std::vector<double> line_derivative_sup(const Profile& y0, double L, double x_lo, double x_hi, int n_x, double t,
                                        int p_max, LineQuadrature quad, const AiryTable& table) {
  if (n_x < 1) fail(ErrorCode::invalid_argument, "need at least one x sample");
  std::vector<double> sup(static_cast<std::size_t>(p_max) + 1, 0.0);
  for (int i = 0; i < n_x; ++i) {
    const double x = n_x == 1 ? x_lo : x_lo + (x_hi - x_lo) * i / (n_x - 1);
    for (int p = 0; p <= p_max; ++p) {
      sup[static_cast<std::size_t>(p)] =
          std::max(sup[static_cast<std::size_t>(p)], std::abs(line_solution(y0, L, x, t, p, quad, table)));
    }
  }
  return sup;
}

}  // namespace kdvflat
