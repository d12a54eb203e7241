#include "kdvflat/genfun.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "kdvflat/error.hpp"
#include "kdvflat/quadrature.hpp"

namespace kdvflat {
namespace {

constexpr double kTailTolerance = 1e-18;

}  // namespace

std::span<const double> GeneratingTable::coeffs(int i) const {
  if (i < 0 || i > i_max()) fail(ErrorCode::invalid_argument, "generating function index out of range");
  return rows_[static_cast<std::size_t>(i)];
}

void GeneratingTable::perturb(int i, int k, double delta) {
  if (i < 0 || i > i_max() || k < 0 || k >= n_terms_) {
    fail(ErrorCode::invalid_argument, "perturbation index out of range");
  }
  rows_[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] += delta;
}

GeneratingTable build_table(double a, int i_max, int n_terms) {
  if (!(a >= 0.0) || !std::isfinite(a)) fail(ErrorCode::invalid_argument, "drift coefficient a must be >= 0");
  if (i_max < 0) fail(ErrorCode::invalid_argument, "i_max must be >= 0");
  if (n_terms < 3 * i_max + 3) {
    fail(ErrorCode::resolution, "n_terms = " + std::to_string(n_terms) + " cannot hold g_" + std::to_string(i_max) +
                                    " (need >= " + std::to_string(3 * i_max + 3) + ")");
  }
  const auto n = static_cast<std::size_t>(n_terms);
  std::vector<PowerSeries> rows;
  rows.reserve(static_cast<std::size_t>(i_max) + 1);

  PowerSeries prev(n, 0.0);  // forcing -g_{i-1}; zero for g_0
  for (int i = 0; i <= i_max; ++i) {
    PowerSeries d(n, 0.0);
    if (i == 0) d[2] = 0.5;
    for (std::size_t k = 0; k + 3 < n; ++k) {
      const double kk = static_cast<double>(k);
      const double rhs = -prev[k] - a * (kk + 1.0) * d[k + 1];
      d[k + 3] = rhs / ((kk + 3.0) * (kk + 2.0) * (kk + 1.0));
    }
    rows.push_back(d);
    prev = std::move(d);
  }

  for (int i = 0; i <= i_max; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    double scale = 0.0;
    for (double v : row) scale = std::max(scale, std::abs(v));
    double tail = 0.0;
    for (std::size_t k = n - 3; k < n; ++k) tail += std::abs(row[k]);
    if (!(tail <= kTailTolerance * scale)) {
      fail(ErrorCode::resolution, "series for g_" + std::to_string(i) + " not resolved with " +
                                      std::to_string(n_terms) + " terms (tail/scale = " +
                                      std::to_string(tail / scale) + ")");
    }
  }
  return GeneratingTable(a, n_terms, std::move(rows));
}

double eval_series(std::span<const double> p, double x, int d) {
  if (d < 0) fail(ErrorCode::invalid_argument, "derivative order must be >= 0");
  const int n = static_cast<int>(p.size());
  double acc = 0.0;
  for (int k = n - 1; k >= d; --k) {
    double falling = 1.0;
    for (int j = 0; j < d; ++j) falling *= static_cast<double>(k - j);
    acc = acc * x + p[static_cast<std::size_t>(k)] * falling;
  }
  return acc;
}

double eval_g(const GeneratingTable& table, int i, double x, int d) {
  if (!(x >= -1.0 && x <= 0.0)) fail(ErrorCode::domain, "generating functions are certified on [-1, 0] only");
  if (d > table.n_terms() - 1) fail(ErrorCode::invalid_argument, "derivative order exceeds series length");
  return eval_series(table.coeffs(i), x, d);
}

double BoundReport::max_ratio() const {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, r.max_ratio);
  return m;
}

BoundReport check_lemma1(const GeneratingTable& table, std::span<const double> grid) {
  BoundReport report;
  for (int i = 0; i <= table.i_max(); ++i) {
    const auto c = table.coeffs(i);
    const int lead = 3 * i + 2;
    const double lead_fact = std::tgamma(static_cast<double>(lead) + 1.0);
    // g_i(x) (3i+2)! / x^(3i+2) = sum_k c_k (3i+2)! x^(k - 3i - 2)
    PowerSeries shifted;
    for (int k = lead; k < static_cast<int>(c.size()); ++k) shifted.push_back(c[static_cast<std::size_t>(k)] * lead_fact);
    Lemma1Row row{i, 0.0, 0.0};
    for (double x : grid) {
      if (!(x >= -1.0 && x <= 0.0)) fail(ErrorCode::domain, "envelope grid must lie in [-1, 0]");
      double ratio = 0.0;
      double low = 0.0;
      for (int k = 0; k < lead && k < static_cast<int>(c.size()); ++k) {
        const double ck = c[static_cast<std::size_t>(k)];
        if (ck != 0.0) {
          low = (x == 0.0) ? INFINITY : low + ck * lead_fact * std::pow(x, k - lead);
        }
      }
      ratio = std::abs(eval_series(shifted, x) + low);
      if (ratio > row.max_ratio || std::isnan(ratio)) {
        row.max_ratio = std::isnan(ratio) ? INFINITY : ratio;
        row.worst_x = x;
      }
    }
    if (row.max_ratio > 1.0 + report.tolerance) report.violated = true;
    report.rows.push_back(row);
  }
  return report;
}

PowerSeries differentiate(std::span<const double> f, int d) {
  PowerSeries out(f.begin(), f.end());
  for (int r = 0; r < d; ++r) {
    for (std::size_t k = 0; k < out.size(); ++k) {
      out[k] = (k + 1 < out.size()) ? static_cast<double>(k + 1) * out[k + 1] : 0.0;
    }
  }
  return out;
}

PowerSeries apply_P(std::span<const double> f, double a, int n) {
  if (n < 0) fail(ErrorCode::invalid_argument, "power of P must be >= 0");
  PowerSeries cur(f.begin(), f.end());
  for (int r = 0; r < n; ++r) {
    PowerSeries next(cur.size(), 0.0);
    for (std::size_t k = 1; k < cur.size(); ++k) {
      const double kk = static_cast<double>(k);
      if (k >= 3) next[k - 3] += kk * (kk - 1.0) * (kk - 2.0) * cur[k];
      next[k - 1] += a * kk * cur[k];
    }
    cur = std::move(next);
  }
  return cur;
}

std::string table_to_json(const GeneratingTable& table) {
  nlohmann::json doc;
  doc["a"] = table.a();
  doc["i_max"] = table.i_max();
  doc["n_terms"] = table.n_terms();
  auto& rows = doc["coeffs"] = nlohmann::json::array();
  for (int i = 0; i <= table.i_max(); ++i) {
    const auto c = table.coeffs(i);
    rows.push_back(std::vector<double>(c.begin(), c.end()));
  }
  return doc.dump();
}

double g0_closed_form(double a, double x) {
  if (a < 0.0) fail(ErrorCode::invalid_argument, "a must be >= 0");
  if (a == 0.0) return 0.5 * x * x;
  // (1 - cos(sqrt(a) x)) / a, written with sin^2 to avoid cancellation near 0
  const double h = std::sin(0.5 * std::sqrt(a) * x);
  return 2.0 * h * h / a;
}

namespace {

double convolve(double a, int i, double x, const GaussRule& ref) {
  if (i == 0) return g0_closed_form(a, x);
  if (x == 0.0) return 0.0;
  // g_i(x) = int_x^0 g_0(x - xi) g_{i-1}(xi) dxi, reference rule mapped from [0, 1]
  double s = 0.0;
  for (std::size_t q = 0; q < ref.nodes.size(); ++q) {
    const double xi = x * (1.0 - ref.nodes[q]);
    s += ref.weights[q] * g0_closed_form(a, x - xi) * convolve(a, i - 1, xi, ref);
  }
  return -x * s;
}

}  // namespace

double g_by_convolution(double a, int i, double x, int nodes) {
  if (i < 0) fail(ErrorCode::invalid_argument, "index must be >= 0");
  if (x < -1.0 || x > 0.0) fail(ErrorCode::domain, "x must lie in [-1, 0]");
  if (nodes < 2) fail(ErrorCode::invalid_argument, "need at least two quadrature nodes");
  return convolve(a, i, x, gauss_legendre(nodes, 0.0, 1.0));
}

}  // namespace kdvflat
