#include "kdvflat/flatout.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "kdvflat/error.hpp"

namespace kdvflat {
namespace {

// |q| beyond this makes phi differ from its plateau by less than e^-700.
constexpr double kExponentCutoff = 700.0;
constexpr int kEnvelopeSamples = 201;

Jet plateau(double rho, int depth, double value) { return Jet(rho, depth, value); }

Jet with_point(const Jet& j, double t0) { return Jet(t0, std::vector<double>(j.coeffs().begin(), j.coeffs().end())); }

// Solves the 3x3 system in place (partial pivoting).
std::array<double, 3> solve3(std::array<std::array<double, 4>, 3> m) {
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r = c + 1; r < 3; ++r) {
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    }
    std::swap(m[c], m[piv]);
    if (m[c][c] == 0.0) fail(ErrorCode::fit, "singular normal equations in Gevrey fit");
    for (int r = c + 1; r < 3; ++r) {
      const double f = m[r][c] / m[c][c];
      for (int k = c; k < 4; ++k) m[r][k] -= f * m[c][k];
    }
  }
  std::array<double, 3> x{};
  for (int r = 2; r >= 0; --r) {
    double s = m[r][3];
    for (int k = r + 1; k < 3; ++k) s -= m[r][k] * x[k];
    x[r] = s / m[r][r];
  }
  return x;
}

std::vector<double> sample_grid(double lo, double hi, int n) {
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) t[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (n - 1);
  return t;
}

}  // namespace

void StepParams::validate() const {
  if (!(s > 1.0) || !std::isfinite(s)) fail(ErrorCode::invalid_argument, "Gevrey order s must exceed 1");
  if (!(M > 0.0) || !std::isfinite(M)) fail(ErrorCode::invalid_argument, "step shape constant M must be > 0");
  if (!(tau > 0.0 && tau < T)) fail(ErrorCode::invalid_argument, "need 0 < tau < T");
}

Jet step_phi(const StepParams& params, double rho, int depth) {
  if (depth < 0) fail(ErrorCode::invalid_argument, "jet depth must be >= 0");
  if (!(params.s > 1.0) || !(params.M > 0.0)) fail(ErrorCode::invalid_argument, "step needs s > 1 and M > 0");
  if (rho <= kStepClampBand) return plateau(rho, depth, 1.0);
  if (rho >= 1.0 - kStepClampBand) return plateau(rho, depth, 0.0);

  const double sigma = params.sigma();
  const double q0 = params.M * (std::pow(1.0 - rho, -sigma) - std::pow(rho, -sigma));
  if (q0 > kExponentCutoff) return plateau(rho, depth, 0.0);
  if (q0 < -kExponentCutoff) return plateau(rho, depth, 1.0);

  // phi = 1 / (1 + e^q),  q = M (1 - rho)^-sigma - M rho^-sigma
  const Jet r = jet_var(rho, depth);
  const Jet q = params.M * (jet_pow_real(1.0 - r, -sigma) - jet_pow_real(r, -sigma));
  const Jet one(rho, depth, 1.0);
  if (q0 <= 0.0) {
    return one / (jet_exp(q) + 1.0);
  }
  const Jet e = jet_exp(-q);
  return e / (e + 1.0);
}

Jet step_phi_time(const StepParams& params, double t, int depth) {
  const double span = params.T - params.tau;
  if (!(span > 0.0)) fail(ErrorCode::invalid_argument, "need tau < T");
  const double rho = (t - params.tau) / span;
  return with_point(jet_compose_affine(step_phi(params, rho, depth), 1.0 / span, -params.tau / span), t);
}

Jet bump_g(double tau, double T, double t, int depth, double M) {
  if (!(tau < T)) fail(ErrorCode::invalid_argument, "bump needs tau < T");
  StepParams p{2.0, M, tau, T};
  return 1.0 - step_phi_time(p, t, depth);
}

std::vector<double> extract_b(std::span<const double> y1, double a, int N, double tolerance) {
  if (N < 0) fail(ErrorCode::invalid_argument, "N must be >= 0");
  std::vector<double> b(static_cast<std::size_t>(N) + 1, 0.0);
  PowerSeries cur(y1.begin(), y1.end());
  cur.resize(std::max<std::size_t>(cur.size(), 3), 0.0);
  // P lowers the degree, so the reachable-class conditions need checking only until P^n y1 vanishes.
  const int n_check = std::max<int>(N, static_cast<int>(cur.size()));
  double sign = 1.0;
  for (int n = 0; n <= n_check; ++n) {
    if (std::abs(cur[0]) > tolerance || std::abs(cur[1]) > tolerance) {
      fail(ErrorCode::not_reachable, "target violates (P^n y)(0) = d_x(P^n y)(0) = 0 at n = " + std::to_string(n));
    }
    if (n <= N) b[static_cast<std::size_t>(n)] = sign * 2.0 * cur[2];
    sign = -sign;
    cur = apply_P(cur, a, 1);
    if (n >= N && std::all_of(cur.begin(), cur.end(), [](double v) { return v == 0.0; })) break;
  }
  return b;
}

PowerSeries synthesize_from_b(const GeneratingTable& table, std::span<const double> b) {
  if (static_cast<int>(b.size()) > table.i_max() + 1) {
    fail(ErrorCode::invalid_argument, "more b coefficients than generating functions in the table");
  }
  PowerSeries y(static_cast<std::size_t>(table.n_terms()), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) {
    const auto g = table.coeffs(static_cast<int>(i));
    for (std::size_t k = 0; k < y.size(); ++k) y[k] += b[i] * g[k];
  }
  return y;
}

GevreyFit gevrey_fit(std::span<const double> magnitudes) {
  if (magnitudes.size() < 8) fail(ErrorCode::fit, "Gevrey fit needs at least 8 orders");
  int last_nonzero = -1;
  double max_m = 0.0;
  for (std::size_t i = 0; i < magnitudes.size(); ++i) {
    const double m = std::abs(magnitudes[i]);
    if (!std::isfinite(m)) fail(ErrorCode::fit, "non-finite derivative magnitude");
    if (m > 0.0) last_nonzero = static_cast<int>(i);
    max_m = std::max(max_m, m);
  }
  if (last_nonzero < 0) fail(ErrorCode::fit, "all derivative magnitudes vanish");

  GevreyFit fit;
  fit.finite_support = last_nonzero < static_cast<int>(magnitudes.size()) - 1;
  std::array<std::array<double, 4>, 3> ne{};
  int used = 0;
  for (int i = 0; i <= last_nonzero; ++i) {
    const double m = std::abs(magnitudes[static_cast<std::size_t>(i)]);
    if (m == 0.0) continue;
    const std::array<double, 3> row{1.0, std::lgamma(i + 1.0), -static_cast<double>(i)};
    const double y = std::log(m);
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) ne[r][c] += row[r] * row[c];
      ne[r][3] += row[r] * y;
    }
    ++used;
  }
  fit.orders_used = used;
  if (used < 3) {
    fit.s = 0.0;
    fit.R = std::numeric_limits<double>::infinity();
    fit.C = max_m;
    return fit;
  }
  const auto x = solve3(ne);
  fit.C = std::exp(x[0]);
  fit.s = x[1];
  fit.R = std::exp(x[2]);
  return fit;
}

Envelope fit_envelope(std::span<const double> magnitudes, double s_env) {
  Envelope env;
  env.s_env = s_env;
  // log m_i - s log(i!) = log C - i log R
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < magnitudes.size(); ++i) {
    const double m = std::abs(magnitudes[i]);
    if (m == 0.0) continue;
    const double x = static_cast<double>(i);
    const double y = std::log(m) - s_env * std::lgamma(x + 1.0);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n == 0) return env;
  double log_r = 0.0;
  if (n >= 2) {
    const double den = n * sxx - sx * sx;
    if (den != 0.0) log_r = -(n * sxy - sx * sy) / den;
  }
  env.R_env = std::exp(log_r);
  double log_m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < magnitudes.size(); ++i) {
    const double m = std::abs(magnitudes[i]);
    if (m == 0.0) continue;
    const double x = static_cast<double>(i);
    log_m = std::max(log_m, std::log(m) - s_env * std::lgamma(x + 1.0) + x * log_r);
  }
  env.M_env = std::exp(log_m);
  return env;
}

FlatOutput::FlatOutput(FlatKind kind, double tau, double T, int max_depth, Source source)
    : kind_(kind), tau_(tau), T_(T), max_depth_(max_depth), source_(std::move(source)) {}

Jet FlatOutput::jet(double t, int depth) const {
  if (depth > max_depth_) {
    fail(ErrorCode::depth, "flat output supplies jets to depth " + std::to_string(max_depth_) + ", requested " +
                               std::to_string(depth));
  }
  return source_(t, depth);
}

std::vector<double> FlatOutput::derivative_sup(std::span<const double> times, int depth) const {
  std::vector<double> sup(static_cast<std::size_t>(depth) + 1, 0.0);
  for (double t : times) {
    const auto d = jet(t, depth).derivatives();
    for (std::size_t i = 0; i < sup.size(); ++i) sup[i] = std::max(sup[i], std::abs(d[i]));
  }
  return sup;
}

FlatOutput flat_output_reach(std::span<const double> b, double tau, double T, int depth, double M) {
  if (!(tau > 0.0 && tau < T)) fail(ErrorCode::invalid_argument, "need 0 < tau < T");
  if (depth < static_cast<int>(b.size())) {
    fail(ErrorCode::depth, "reach flat output needs depth >= number of b coefficients");
  }
  std::vector<double> coeffs(b.begin(), b.end());
  auto source = [coeffs, tau, T, M](double t, int d) {
    // Taylor coefficients of f(t) = sum_i b_i (t - T)^i / i! at t: f^(k)(t)/k!.
    std::vector<double> f(static_cast<std::size_t>(d) + 1, 0.0);
    const double h = t - T;
    double k_fact = 1.0;
    for (int k = 0; k <= d; ++k) {
      if (k > 1) k_fact *= k;
      double s = 0.0;
      double term = 1.0;  // h^(i-k)/(i-k)!
      for (int i = k; i < static_cast<int>(coeffs.size()); ++i) {
        s += coeffs[static_cast<std::size_t>(i)] * term;
        term *= h / static_cast<double>(i - k + 1);
      }
      f[static_cast<std::size_t>(k)] = s / k_fact;
    }
    return bump_g(tau, T, t, d, M) * Jet(t, std::move(f));
  };
  FlatOutput z(FlatKind::reach, tau, T, depth, std::move(source));
  const auto grid = sample_grid(0.0, T, kEnvelopeSamples);
  z.set_envelope(fit_envelope(z.derivative_sup(grid, depth), 3.0));
  return z;
}

FlatOutput flat_output_null(TraceSource trace, const StepParams& params, int depth) {
  params.validate();
  if (!trace.jets) fail(ErrorCode::invalid_argument, "trace source has no jet provider");
  const double slack = 1e-12 * params.T;
  if (trace.t_begin > params.tau + slack || trace.t_end < params.T - slack) {
    fail(ErrorCode::invalid_argument, "trace jets must cover [tau, T]");
  }
  auto source = [trace = std::move(trace), params](double t, int d) {
    Jet phi = step_phi_time(params, t, d);
    if (std::all_of(phi.coeffs().begin(), phi.coeffs().end(), [](double v) { return v == 0.0; })) return phi;
    const int wd = std::min(d, trace.max_depth);
    const Jet w = with_point(trace.jets(t, wd).with_order(d), t);
    return phi * w;
  };
  FlatOutput z(FlatKind::null_control, params.tau, params.T, depth, std::move(source));
  const auto grid = sample_grid(params.tau, params.T, kEnvelopeSamples);
  z.set_envelope(fit_envelope(z.derivative_sup(grid, depth), params.s));
  return z;
}

}  // namespace kdvflat
