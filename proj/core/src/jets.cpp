#include "kdvflat/jets.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "kdvflat/error.hpp"

namespace kdvflat {
namespace {

void require_compatible(const Jet& a, const Jet& b) {
  if (a.order() != b.order() || a.t0() != b.t0()) {
    fail(ErrorCode::invalid_argument,
         "jet operands differ in order or expansion point (" + std::to_string(a.order()) + "@" +
             std::to_string(a.t0()) + " vs " + std::to_string(b.order()) + "@" + std::to_string(b.t0()) + ")");
  }
}

void require_finite(const std::vector<double>& c) {
  for (double v : c) {
    if (!std::isfinite(v)) fail(ErrorCode::range, "jet coefficient overflow");
  }
}

}  // namespace

Jet::Jet(double t0, int order, double value) : t0_(t0) {
  if (order < 0) fail(ErrorCode::invalid_argument, "jet order must be non-negative");
  coeffs_.assign(static_cast<std::size_t>(order) + 1, 0.0);
  coeffs_[0] = value;
}

Jet::Jet(double t0, std::vector<double> coeffs) : t0_(t0), coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) fail(ErrorCode::invalid_argument, "jet needs at least one coefficient");
  require_finite(coeffs_);
}

double Jet::derivative(int k) const {
  double d = coeff(k);
  for (int j = 2; j <= k; ++j) d *= j;
  return d;
}

std::vector<double> Jet::derivatives() const {
  std::vector<double> d(coeffs_.size());
  double fact = 1.0;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (k > 1) fact *= static_cast<double>(k);
    d[k] = coeffs_[k] * fact;
  }
  return d;
}

Jet Jet::with_order(int order) const {
  if (order < 0) fail(ErrorCode::invalid_argument, "jet order must be non-negative");
  std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
  for (std::size_t k = 0; k < c.size() && k < coeffs_.size(); ++k) c[k] = coeffs_[k];
  return Jet(t0_, std::move(c));
}

Jet& Jet::operator+=(const Jet& other) {
  require_compatible(*this, other);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += other.coeffs_[k];
  return *this;
}

Jet& Jet::operator-=(const Jet& other) {
  require_compatible(*this, other);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= other.coeffs_[k];
  return *this;
}

Jet& Jet::operator*=(const Jet& other) {
  *this = *this * other;
  return *this;
}

Jet& Jet::operator/=(const Jet& other) {
  *this = *this / other;
  return *this;
}

Jet& Jet::operator+=(double c) {
  coeffs_[0] += c;
  return *this;
}

Jet& Jet::operator*=(double c) {
  for (double& v : coeffs_) v *= c;
  return *this;
}

Jet jet_var(double t0, int order) {
  Jet j(t0, order, t0);
  if (order >= 1) {
    std::vector<double> c(j.coeffs().begin(), j.coeffs().end());
    c[1] = 1.0;
    return Jet(t0, std::move(c));
  }
  return j;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator-(Jet a) { return a *= -1.0; }
Jet operator+(Jet a, double c) { return a += c; }
Jet operator+(double c, Jet a) { return a += c; }
Jet operator-(Jet a, double c) { return a += -c; }
Jet operator-(double c, const Jet& a) { return (-a) += c; }
Jet operator*(Jet a, double c) { return a *= c; }
Jet operator*(double c, Jet a) { return a *= c; }

Jet operator*(const Jet& a, const Jet& b) {
  require_compatible(a, b);
  const auto x = a.coeffs();
  const auto y = b.coeffs();
  std::vector<double> c(x.size(), 0.0);
  for (std::size_t k = 0; k < c.size(); ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j <= k; ++j) s += x[j] * y[k - j];
    c[k] = s;
  }
  return Jet(a.t0(), std::move(c));
}

Jet operator/(const Jet& a, const Jet& b) {
  require_compatible(a, b);
  const auto x = a.coeffs();
  const auto y = b.coeffs();
  if (y[0] == 0.0) fail(ErrorCode::singular, "jet division by a series with zero constant term");
  std::vector<double> q(x.size(), 0.0);
  for (std::size_t k = 0; k < q.size(); ++k) {
    double s = x[k];
    for (std::size_t j = 1; j <= k; ++j) s -= y[j] * q[k - j];
    q[k] = s / y[0];
  }
  return Jet(a.t0(), std::move(q));
}

Jet jet_arith(const Jet& a, const Jet& b, JetOp op) {
  switch (op) {
    case JetOp::add: return a + b;
    case JetOp::sub: return a - b;
    case JetOp::mul: return a * b;
    case JetOp::div: return a / b;
  }
  fail(ErrorCode::invalid_argument, "unknown jet operation");
}

Jet jet_exp(const Jet& a) {
  const auto x = a.coeffs();
  std::vector<double> e(x.size(), 0.0);
  e[0] = std::exp(x[0]);
  if (!std::isfinite(e[0])) fail(ErrorCode::range, "exp overflow in jet_exp");
  for (std::size_t k = 1; k < e.size(); ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * x[j] * e[k - j];
    e[k] = s / static_cast<double>(k);
  }
  return Jet(a.t0(), std::move(e));
}

Jet jet_log(const Jet& a) {
  const auto x = a.coeffs();
  if (!(x[0] > 0.0)) fail(ErrorCode::domain, "jet_log needs a positive constant term");
  std::vector<double> l(x.size(), 0.0);
  l[0] = std::log(x[0]);
  // x' = x * l'  =>  k x_k = sum_{j=1..k} j l_j x_{k-j}
  for (std::size_t k = 1; k < l.size(); ++k) {
    double s = static_cast<double>(k) * x[k];
    for (std::size_t j = 1; j < k; ++j) s -= static_cast<double>(j) * l[j] * x[k - j];
    l[k] = s / (static_cast<double>(k) * x[0]);
  }
  return Jet(a.t0(), std::move(l));
}

Jet jet_pow_real(const Jet& a, double sigma) {
  if (!(a.value() > 0.0)) fail(ErrorCode::domain, "jet_pow_real needs a positive constant term");
  return jet_exp(jet_log(a) * sigma);
}

namespace {

std::pair<Jet, Jet> sin_cos(const Jet& a) {
  const auto x = a.coeffs();
  std::vector<double> s(x.size(), 0.0);
  std::vector<double> c(x.size(), 0.0);
  s[0] = std::sin(x[0]);
  c[0] = std::cos(x[0]);
  for (std::size_t k = 1; k < x.size(); ++k) {
    double ss = 0.0;
    double cc = 0.0;
    for (std::size_t j = 1; j <= k; ++j) {
      ss += static_cast<double>(j) * x[j] * c[k - j];
      cc -= static_cast<double>(j) * x[j] * s[k - j];
    }
    s[k] = ss / static_cast<double>(k);
    c[k] = cc / static_cast<double>(k);
  }
  return {Jet(a.t0(), std::move(s)), Jet(a.t0(), std::move(c))};
}

}  // namespace

Jet jet_sin(const Jet& a) { return sin_cos(a).first; }
Jet jet_cos(const Jet& a) { return sin_cos(a).second; }

Jet jet_compose_affine(const Jet& a, double alpha, double beta) {
  if (alpha == 0.0) fail(ErrorCode::invalid_argument, "affine reparameterization needs alpha != 0");
  std::vector<double> c(a.coeffs().begin(), a.coeffs().end());
  double scale = 1.0;
  for (double& v : c) {
    v *= scale;
    scale *= alpha;
  }
  return Jet((a.t0() - beta) / alpha, std::move(c));
}

}  // namespace kdvflat
