#pragma once

// Gevrey-class flat outputs z(t).
//
// The step function phi_s(rho) equals 1 for rho <= 0, 0 for rho >= 1 and
//   exp(-M/(1-rho)^sigma) / (exp(-M/rho^sigma) + exp(-M/(1-rho)^sigma))
// in between, with sigma = 1/(s-1). It is Gevrey of order s.

#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "kdvflat/genfun.hpp"
#include "kdvflat/jets.hpp"

namespace kdvflat {

struct StepParams {
  double s = 2.0;
  double M = 1.0;
  double tau = 0.5;
  double T = 1.0;

  double sigma() const { return 1.0 / (s - 1.0); }
  /// Throws ErrorCode::invalid_argument unless 0 < tau < T, M > 0, s > 1.
  void validate() const;
};

/// Plateau band: rho within this distance of 0 or 1 (from inside) returns the plateau jet.
inline constexpr double kStepClampBand = 1e-12;

/// Jet (in rho) of phi_s at rho.
Jet step_phi(const StepParams& params, double rho, int depth);

/// Jet (in t) of phi_s((t - tau)/(T - tau)).
Jet step_phi_time(const StepParams& params, double t, int depth);

/// Jet of g(t) = 1 - phi_2((t - tau)/(T - tau)).
Jet bump_g(double tau, double T, double t, int depth, double M = 1.0);

/// b_n = (-1)^n d_x^2 (P^n y1)(0) for n = 0..N, so that y1 = sum_n b_n g_n.
/// y1 is given by its power series about 0. Throws ErrorCode::not_reachable when
/// (P^n y1)(0) or d_x (P^n y1)(0) exceeds `tolerance` for some n. The series is taken as
/// an exact polynomial, so a truncated drift series fails at high n unless a is small.
std::vector<double> extract_b(std::span<const double> y1, double a, int N, double tolerance = 1e-10);

/// Power series of sum_n b_n g_n (truncated to the table's series length).
PowerSeries synthesize_from_b(const GeneratingTable& table, std::span<const double> b);

/// Claimed bound |z^(i)(t)| <= M_env (i!)^s_env / R_env^i.
struct Envelope {
  double M_env = 0.0;
  double R_env = 1.0;
  double s_env = 1.0;
};

struct GevreyFit {
  double s = 0.0;
  double R = 1.0;
  double C = 0.0;
  bool finite_support = false;
  int orders_used = 0;
};

/// Least-squares fit of log m_i = log C + s log(i!) - i log R on the nonzero entries.
/// Needs at least 8 orders; throws ErrorCode::fit for all-zero input.
GevreyFit gevrey_fit(std::span<const double> magnitudes);

/// Envelope with s fixed: R by least squares, M_env the smallest constant that
/// bounds every supplied magnitude.
Envelope fit_envelope(std::span<const double> magnitudes, double s_env);

enum class FlatKind { reach, null_control };

/// Time-parameterized source of jets of z.
class FlatOutput {
 public:
  using Source = std::function<Jet(double t, int depth)>;

  FlatOutput(FlatKind kind, double tau, double T, int max_depth, Source source);

  FlatKind kind() const noexcept { return kind_; }
  double tau() const noexcept { return tau_; }
  double T() const noexcept { return T_; }
  int max_depth() const noexcept { return max_depth_; }

  /// Jet of z at t with `depth` + 1 coefficients. Throws ErrorCode::depth beyond max_depth.
  Jet jet(double t, int depth) const;

  const Envelope& envelope() const noexcept { return envelope_; }
  void set_envelope(const Envelope& env) { envelope_ = env; }

  /// sup over the samples of |z^(i)|, i = 0..depth.
  std::vector<double> derivative_sup(std::span<const double> times, int depth) const;

 private:
  FlatKind kind_;
  double tau_;
  double T_;
  int max_depth_;
  Source source_;
  Envelope envelope_;
};

/// z = g f with f(t) = sum_i b_i (t - T)^i / i!, so z^(i)(T) = b_i and z^(i)(0) = 0.
/// Throws ErrorCode::depth when depth < b.size().
FlatOutput flat_output_reach(std::span<const double> b, double tau, double T, int depth, double M = 1.0);

/// Jets of the free-evolution trace w(t) = d_x^2 y(0, t).
struct TraceSource {
  std::function<Jet(double t, int depth)> jets;
  double t_begin = 0.0;  ///< first time at which jets are available
  double t_end = 0.0;
  /// Highest trace derivative used; higher coefficients of w are taken as zero.
  int max_depth = std::numeric_limits<int>::max();
};

/// z(t) = phi_s((t - tau)/(T - tau)) w(t). Throws ErrorCode::invalid_argument if the
/// trace does not cover [tau, T].
FlatOutput flat_output_null(TraceSource trace, const StepParams& params, int depth);

}  // namespace kdvflat
