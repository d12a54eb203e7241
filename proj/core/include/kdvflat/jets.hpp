#pragma once

// Truncated univariate Taylor arithmetic.
//
// A Jet of order N at t0 stores c_k = f^(k)(t0)/k! for k = 0..N. Storing the
// Taylor coefficients rather than derivative values keeps magnitudes bounded
// for Gevrey-class inputs whose derivatives grow like (k!)^s.

#include <cstddef>
#include <span>
#include <vector>

namespace kdvflat {

class Jet {
 public:
  /// Constant jet `value` of the given order at t0.
  Jet(double t0, int order, double value = 0.0);
  /// Jet from explicit Taylor coefficients (coeffs[k] = f^(k)(t0)/k!).
  Jet(double t0, std::vector<double> coeffs);

  double t0() const noexcept { return t0_; }
  int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  double value() const noexcept { return coeffs_.front(); }

  std::span<const double> coeffs() const noexcept { return coeffs_; }
  double coeff(int k) const { return coeffs_.at(static_cast<std::size_t>(k)); }

  /// f^(k)(t0) = coeffs[k] * k!.
  double derivative(int k) const;
  /// All derivative values f^(0..order)(t0).
  std::vector<double> derivatives() const;

  /// Copy truncated (or zero-padded) to a new order.
  Jet with_order(int order) const;

  Jet& operator+=(const Jet& other);
  Jet& operator-=(const Jet& other);
  Jet& operator*=(const Jet& other);
  Jet& operator/=(const Jet& other);
  Jet& operator+=(double c);
  Jet& operator*=(double c);

  friend bool operator==(const Jet&, const Jet&) = default;

 private:
  double t0_;
  std::vector<double> coeffs_;
};

/// The identity map t at t0: [t0, 1, 0, ...].
Jet jet_var(double t0, int order);

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator-(Jet a);
Jet operator+(Jet a, double c);
Jet operator+(double c, Jet a);
Jet operator-(Jet a, double c);
Jet operator-(double c, const Jet& a);
Jet operator*(Jet a, double c);
Jet operator*(double c, Jet a);

enum class JetOp { add, sub, mul, div };
Jet jet_arith(const Jet& a, const Jet& b, JetOp op);

Jet jet_exp(const Jet& a);
Jet jet_log(const Jet& a);
/// a^sigma for a real exponent, computed as exp(sigma * log a). Requires a(t0) > 0.
Jet jet_pow_real(const Jet& a, double sigma);
Jet jet_sin(const Jet& a);
Jet jet_cos(const Jet& a);

/// Jet of t -> f(alpha * t + beta), expanded at (a.t0() - beta) / alpha.
Jet jet_compose_affine(const Jet& a, double alpha, double beta);

}  // namespace kdvflat
