#pragma once

// Generating functions g_i of the flatness parameterization on [-1, 0].
//
// g_0 solves g''' + a g' = 0 with g(0) = g'(0) = 0, g''(0) = 1, and for i >= 1
// g_i solves g''' + a g' = -g_{i-1} with zero Cauchy data at x = 0. Each g_i is
// entire; it is stored as its Taylor series about x = 0.

#include <span>
#include <utility>
#include <string>
#include <vector>

namespace kdvflat {

/// Power-series coefficients p[k] of sum_k p[k] x^k.
using PowerSeries = std::vector<double>;

class GeneratingTable {
 public:
  /// Default series length for a table holding g_0..g_{i_max}.
  static int default_terms(int i_max) { return 3 * i_max + 40; }

  double a() const noexcept { return a_; }
  int i_max() const noexcept { return static_cast<int>(rows_.size()) - 1; }
  int n_terms() const noexcept { return n_terms_; }

  /// Taylor coefficients of g_i about 0.
  std::span<const double> coeffs(int i) const;

  /// Test hook: adds delta to one coefficient (fault injection for the verify suite).
  void perturb(int i, int k, double delta);

  friend GeneratingTable build_table(double a, int i_max, int n_terms);

 private:
  GeneratingTable(double a, int n_terms, std::vector<PowerSeries> rows)
      : a_(a), n_terms_(n_terms), rows_(std::move(rows)) {}

  double a_;
  int n_terms_;
  std::vector<PowerSeries> rows_;
};

/// Builds g_0..g_{i_max} by matching Taylor coefficients:
///   (k+3)(k+2)(k+1) d_{k+3} + a (k+1) d_{k+1} = -c_k.
/// Throws ErrorCode::invalid_argument for a < 0 and ErrorCode::resolution when the
/// series is too short to resolve g_{i_max} on [-1, 0].
GeneratingTable build_table(double a, int i_max, int n_terms);
inline GeneratingTable build_table(double a, int i_max) {
  return build_table(a, i_max, GeneratingTable::default_terms(i_max));
}

/// d-th derivative of g_i at x in [-1, 0].
double eval_g(const GeneratingTable& table, int i, double x, int d = 0);

/// d-th derivative of a power series at x (no domain restriction).
double eval_series(std::span<const double> p, double x, int d = 0);

struct Lemma1Row {
  int i = 0;
  double max_ratio = 0.0;  ///< max over grid of |g_i(x)| (3i+2)! / |x|^(3i+2)
  double worst_x = 0.0;
};

struct BoundReport {
  std::vector<Lemma1Row> rows;
  double tolerance = 1e-10;
  bool violated = false;
  double max_ratio() const;
};

/// Checks |g_i(x)| <= |x|^(3i+2)/(3i+2)! on the grid. At x = 0 the ratio is taken
/// as its limit (the leading coefficient scaled by (3i+2)!).
BoundReport check_lemma1(const GeneratingTable& table, std::span<const double> grid);

/// Coefficients of P^n f with P = d^3/dx^3 + a d/dx, as an exact map on power series.
PowerSeries apply_P(std::span<const double> f, double a, int n = 1);

/// JSON document {"a", "i_max", "n_terms", "coeffs": row-major (i_max+1) x n_terms list}.
std::string table_to_json(const GeneratingTable& table);

/// g_0 in closed form: x^2/2 for a = 0, (1 - cos(sqrt(a) x))/a otherwise.
double g0_closed_form(double a, double x);

/// g_i(x) from the convolution identity g_i(x) = int_x^0 g_0(x - xi) g_{i-1}(xi) dxi,
/// nested Gauss-Legendre with `nodes` points per level. Independent of the Taylor
/// recurrence; cost grows like nodes^i.
double g_by_convolution(double a, int i, double x, int nodes = 16);

/// Power-series derivative of order d.
PowerSeries differentiate(std::span<const double> f, int d = 1);

}  // namespace kdvflat
