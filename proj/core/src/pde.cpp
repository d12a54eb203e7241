#include "kdvflat/pde.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "kdvflat/error.hpp"
#include "kdvflat/quadrature.hpp"

namespace kdvflat {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kBlowupFactor = 10.0;

double l2_legendre(const VectorXd& c) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < c.size(); ++k) s += c[k] * c[k] / (2.0 * static_cast<double>(k) + 1.0);
  return std::sqrt(s);
}

// Legendre-Galerkin operators for degree n.
struct Galerkin {
  int n;
  MatrixXd Dx;    // d/dx on coefficients
  MatrixXd Phi;   // (n+1) x (n-2) basis of the homogeneous space
  MatrixXd G;     // Phi^T W
  MatrixXd GP;    // Phi^T W P
  MatrixXd bc;    // 3 x (n+1): y(0), y_x(0) (scaled), y(-1)

  Galerkin(int n_x, double a) : n(n_x) {
    const int m = n + 1;
    Dx = MatrixXd::Zero(m, m);
    for (int j = 0; j < m; ++j) {
      for (int k = j + 1; k < m; k += 2) Dx(j, k) = 2.0 * (2.0 * j + 1.0);
    }
    const MatrixXd P = Dx * Dx * Dx + a * Dx;

    Phi = MatrixXd::Zero(m, n - 2);
    for (int k = 0; k < n - 2; ++k) {
      // phi_k = P_k + al P_{k+1} + be P_{k+2} + ga P_{k+3} with phi(1) = phi'(1) = phi(-1) = 0
      const double kk = k;
      const auto sgn = [](int j) { return (j % 2 == 0) ? 1.0 : -1.0; };
      Eigen::Matrix3d A;
      A << 1.0, 1.0, 1.0, sgn(k + 1), sgn(k + 2), sgn(k + 3), (kk + 1) * (kk + 2) / 2, (kk + 2) * (kk + 3) / 2,
          (kk + 3) * (kk + 4) / 2;
      const Eigen::Vector3d rhs(-1.0, -sgn(k), -kk * (kk + 1) / 2);
      const Eigen::Vector3d abg = A.partialPivLu().solve(rhs);
      Phi(k, k) = 1.0;
      Phi(k + 1, k) = abg[0];
      Phi(k + 2, k) = abg[1];
      Phi(k + 3, k) = abg[2];
    }
    VectorXd w(m);
    for (int k = 0; k < m; ++k) w[k] = 1.0 / (2.0 * k + 1.0);
    G = Phi.transpose() * w.asDiagonal();
    GP = G * P;

    bc = MatrixXd::Zero(3, m);
    for (int k = 0; k < m; ++k) {
      bc(0, k) = 1.0;
      bc(1, k) = static_cast<double>(k) * (k + 1.0) / (n * (n + 1.0));
      bc(2, k) = (k % 2 == 0) ? 1.0 : -1.0;
    }
  }

  int size() const { return n + 1; }

  // Rows for one theta step of size dt.
  MatrixXd step_matrix(double theta, double dt) const {
    MatrixXd S(size(), size());
    S.topRows(n - 2) = G + theta * dt * GP;
    S.bottomRows(3) = bc;
    return S;
  }

  MatrixXd explicit_part(double theta, double dt) const { return G - (1.0 - theta) * dt * GP; }

  // Galerkin projection of y0 onto the affine space with y(-1) = u0.
  VectorXd project(const Profile& y0, double u0) const {
    const auto rule = gauss_legendre(2 * n + 32, -1.0, 0.0);
    VectorXd b = VectorXd::Zero(size());
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double x = rule.nodes[q];
      const double f = y0(x);
      if (!std::isfinite(f)) fail(ErrorCode::invalid_argument, "initial profile is not finite");
      const double xi = 2.0 * x + 1.0;
      double p0 = 1.0, p1 = xi;
      b[0] += rule.weights[q] * f;
      if (size() > 1) b[1] += rule.weights[q] * f * xi;
      for (int k = 2; k < size(); ++k) {
        const double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
        b[k] += rule.weights[q] * f * p2;
        p0 = p1;
        p1 = p2;
      }
    }
    MatrixXd S(size(), size());
    S.topRows(n - 2) = G;
    S.bottomRows(3) = bc;
    VectorXd rhs(size());
    rhs.head(n - 2) = Phi.transpose() * b;
    rhs.tail(3) << 0.0, 0.0, u0;
    return S.partialPivLu().solve(rhs);
  }
};

MatrixXd legendre_sampler(int n, std::span<const double> x_grid) {
  MatrixXd E(static_cast<Eigen::Index>(x_grid.size()), n + 1);
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    const double xi = 2.0 * x_grid[i] + 1.0;
    double p0 = 1.0, p1 = xi;
    const auto r = static_cast<Eigen::Index>(i);
    E(r, 0) = 1.0;
    if (n >= 1) E(r, 1) = xi;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
      E(r, k) = p2;
      p0 = p1;
      p1 = p2;
    }
  }
  return E;
}

std::vector<double> to_std(const VectorXd& v) { return {v.data(), v.data() + v.size()}; }

// Step schedule: (dt, theta) per step, and whether the step lands on a whole multiple of dt.
struct Step {
  double dt;
  double theta;
  bool whole;
};

std::vector<Step> schedule(double T, const Discretization& disc) {
  const double dt = T / disc.n_t;
  std::vector<Step> steps;
  int whole_done = 0;
  if (disc.stepper == Stepper::rannacher) {
    const int half = std::min(disc.startup_steps, 2 * disc.n_t);
    for (int k = 0; k < half; ++k) steps.push_back({0.5 * dt, 1.0, k % 2 == 1});
    whole_done = half / 2;
  }
  for (int k = whole_done; k < disc.n_t; ++k) steps.push_back({dt, disc.theta, true});
  return steps;
}

class Recorder {
 public:
  Recorder(const Discretization& disc, double T) : disc_(disc), dt_(T / disc.n_t) {}

  bool due(int whole_index) const {
    return whole_index % disc_.store_every == 0 || whole_index == disc_.n_t;
  }
  double time(int whole_index) const { return whole_index == disc_.n_t ? dt_ * disc_.n_t : dt_ * whole_index; }

 private:
  const Discretization& disc_;
  double dt_;
};

void check_norm(double norm, double limit, double t) {
  if (!std::isfinite(norm) || norm > limit) {
    fail(ErrorCode::stability, "discrete state norm " + std::to_string(norm) + " exceeds " + std::to_string(limit) +
                                   " at t = " + std::to_string(t));
  }
}

Trajectory solve_galerkin(const BoundaryData& u, const Profile& y0, double a, double T, const Discretization& disc,
                          bool free) {
  const Galerkin gal(disc.n_x, a);
  VectorXd c = gal.project(y0, u(0.0));
  const double norm0 = l2_legendre(c);

  Trajectory traj;
  traj.provenance = Provenance::pde_solver;
  traj.a = a;
  traj.state_kind = StateKind::legendre;
  traj.x_grid = linspace(-1.0, 0.0, static_cast<std::size_t>(disc.n_samples));
  const MatrixXd E = legendre_sampler(disc.n_x, traj.x_grid);
  const Recorder rec(disc, T);
  auto store = [&](double t, const VectorXd& state) {
    traj.t_grid.push_back(t);
    traj.states.push_back(to_std(state));
    const VectorXd row = E * state;
    traj.field.insert(traj.field.end(), row.data(), row.data() + row.size());
  };
  store(0.0, c);

  const auto steps = schedule(T, disc);
  Eigen::PartialPivLU<MatrixXd> lu;
  MatrixXd rhs_op;
  double cur_dt = -1.0, cur_theta = -1.0;
  double t = 0.0;
  int whole = 0;
  double u_max = std::abs(u(0.0));
  const int n_gal = disc.n_x - 2;
  for (const auto& st : steps) {
    if (st.dt != cur_dt || st.theta != cur_theta) {
      lu.compute(gal.step_matrix(st.theta, st.dt));
      rhs_op = gal.explicit_part(st.theta, st.dt);
      cur_dt = st.dt;
      cur_theta = st.theta;
    }
    t += st.dt;
    if (st.whole) {
      ++whole;
      t = rec.time(whole);
    }
    const double ut = free ? 0.0 : u(t);
    u_max = std::max(u_max, std::abs(ut));
    VectorXd rhs(gal.size());
    rhs.head(n_gal) = rhs_op * c;
    rhs.tail(3) << 0.0, 0.0, ut;
    c = lu.solve(rhs);
    const double limit = kBlowupFactor * (norm0 + u_max) + 1e-300;
    check_norm(l2_legendre(c), free ? kBlowupFactor * norm0 + 1e-300 : limit, t);
    if (st.whole && rec.due(whole)) store(t, c);
  }
  return traj;
}

// Second-order finite differences on x_j = -1 + j h, unknowns y_1..y_{J-1}.
Trajectory solve_fd(const BoundaryData& u, const Profile& y0, double a, double T, const Discretization& disc,
                    bool free) {
  const int J = disc.n_x;
  const int m = J - 1;
  const double h = 1.0 / J;
  const double h3 = 2.0 * h * h * h;
  MatrixXd L = MatrixXd::Zero(m, m);
  VectorXd bvec = VectorXd::Zero(m);
  // index of node j in the unknown vector (j = 1..J-1), y_J = 0, ghost y_{J+1} = y_{J-1}
  auto add = [&](int row, int node, double coef) {
    if (node == J) return;
    if (node == J + 1) node = J - 1;
    if (node == 0) {
      bvec[row] += coef;
      return;
    }
    L(row, node - 1) += coef;
  };
  for (int j = 1; j <= J - 1; ++j) {
    const int r = j - 1;
    if (j == 1) {
      const double s[5] = {-3.0, 10.0, -12.0, 6.0, -1.0};
      for (int q = 0; q < 5; ++q) add(r, q, -s[q] / h3);
    } else {
      add(r, j + 2, -1.0 / h3);
      add(r, j + 1, 2.0 / h3);
      add(r, j - 1, -2.0 / h3);
      add(r, j - 2, 1.0 / h3);
    }
    add(r, j + 1, -a / (2.0 * h));
    add(r, j - 1, a / (2.0 * h));
  }

  Trajectory traj;
  traj.provenance = Provenance::pde_solver;
  traj.a = a;
  traj.state_kind = StateKind::nodal;
  traj.x_grid = linspace(-1.0, 0.0, static_cast<std::size_t>(J) + 1);

  VectorXd v(m);
  for (int j = 1; j <= J - 1; ++j) {
    v[j - 1] = y0(traj.x_grid[static_cast<std::size_t>(j)]);
    if (!std::isfinite(v[j - 1])) fail(ErrorCode::invalid_argument, "initial profile is not finite");
  }
  auto full = [&](const VectorXd& inner, double left) {
    std::vector<double> y(static_cast<std::size_t>(J) + 1, 0.0);
    y[0] = left;
    for (int j = 1; j <= J - 1; ++j) y[static_cast<std::size_t>(j)] = inner[j - 1];
    return y;
  };
  const Recorder rec(disc, T);
  auto store = [&](double t, const std::vector<double>& y) {
    traj.t_grid.push_back(t);
    traj.states.push_back(y);
    traj.field.insert(traj.field.end(), y.begin(), y.end());
  };
  double u_prev = free ? 0.0 : u(0.0);
  store(0.0, full(v, u_prev));
  const double norm0 = state_l2(traj, 0);

  const auto steps = schedule(T, disc);
  const MatrixXd I = MatrixXd::Identity(m, m);
  Eigen::PartialPivLU<MatrixXd> lu;
  MatrixXd rhs_op;
  double cur_dt = -1.0, cur_theta = -1.0;
  double t = 0.0;
  int whole = 0;
  double u_max = std::abs(u_prev);
  for (const auto& st : steps) {
    if (st.dt != cur_dt || st.theta != cur_theta) {
      lu.compute(I - st.theta * st.dt * L);
      rhs_op = I + (1.0 - st.theta) * st.dt * L;
      cur_dt = st.dt;
      cur_theta = st.theta;
    }
    t += st.dt;
    if (st.whole) {
      ++whole;
      t = rec.time(whole);
    }
    const double ut = free ? 0.0 : u(t);
    u_max = std::max(u_max, std::abs(ut));
    const VectorXd rhs = rhs_op * v + st.dt * (st.theta * ut + (1.0 - st.theta) * u_prev) * bvec;
    v = lu.solve(rhs);
    u_prev = ut;
    const auto y = full(v, ut);
    double s = 0.0;
    for (int j = 0; j < J; ++j) s += 0.5 * h * (y[j] * y[j] + y[j + 1] * y[j + 1]);
    const double norm = std::sqrt(s);
    check_norm(norm, free ? kBlowupFactor * norm0 + 1e-300 : kBlowupFactor * (norm0 + u_max) + 1e-300, t);
    if (st.whole && rec.due(whole)) store(t, y);
  }
  return traj;
}

Trajectory solve(const BoundaryData& u, const Profile& y0, double a, double T, const Discretization& disc,
                 bool free) {
  disc.validate();
  if (!(a >= 0.0)) fail(ErrorCode::invalid_argument, "drift coefficient a must be >= 0");
  if (!(T > 0.0)) fail(ErrorCode::invalid_argument, "horizon T must be > 0");
  if (!y0) fail(ErrorCode::invalid_argument, "missing initial profile");
  if (disc.scheme == Scheme::spectral_galerkin) return solve_galerkin(u, y0, a, T, disc, free);
  return solve_fd(u, y0, a, T, disc, free);
}

}  // namespace

void Discretization::validate() const {
  if (n_x < 16) fail(ErrorCode::invalid_argument, "n_x must be >= 16");
  if (n_t < 1) fail(ErrorCode::invalid_argument, "n_t must be >= 1");
  if (!(theta >= 0.5 && theta <= 1.0)) fail(ErrorCode::invalid_argument, "theta must lie in [1/2, 1]");
  if (startup_steps < 0 || startup_steps % 2 != 0) {
    fail(ErrorCode::invalid_argument, "startup_steps must be a non-negative even number");
  }
  if (store_every < 1) fail(ErrorCode::invalid_argument, "store_every must be >= 1");
  if (n_samples < 2) fail(ErrorCode::invalid_argument, "n_samples must be >= 2");
}

std::vector<double> solver_times(double T, const Discretization& disc) {
  disc.validate();
  std::vector<double> times{0.0};
  double t = 0.0;
  int whole = 0;
  const double dt = T / disc.n_t;
  for (const auto& st : schedule(T, disc)) {
    t += st.dt;
    if (st.whole) {
      ++whole;
      t = whole == disc.n_t ? T : dt * whole;
    }
    times.push_back(t);
  }
  return times;
}

Trajectory solve_free(const Profile& y0, double a, double T, const Discretization& disc) {
  return solve([](double) { return 0.0; }, y0, a, T, disc, true);
}

Trajectory solve_controlled(const BoundaryData& u, const Profile& y0, double a, double T,
                            const Discretization& disc) {
  if (!u) fail(ErrorCode::invalid_argument, "missing boundary datum");
  return solve(u, y0, a, T, disc, false);
}

Trajectory solve_controlled(const ControlSignal& u, const Profile& y0, double a, double T,
                            const Discretization& disc) {
  const auto& ts = u.times;
  const auto& vs = u.values;
  if (ts.size() != vs.size() || ts.size() < 2) fail(ErrorCode::invalid_argument, "control signal needs >= 2 samples");
  if (!std::is_sorted(ts.begin(), ts.end())) fail(ErrorCode::invalid_argument, "control times must be sorted");
  const double slack = 1e-12 * std::max(1.0, T);
  if (ts.front() > slack || ts.back() < T - slack) fail(ErrorCode::invalid_argument, "control signal must cover [0, T]");
  BoundaryData f = [ts, vs](double t) {
    auto it = std::lower_bound(ts.begin(), ts.end(), t);
    const auto n = static_cast<std::ptrdiff_t>(ts.size());
    std::ptrdiff_t k = it - ts.begin();
    if (k < n && ts[static_cast<std::size_t>(k)] == t) return vs[static_cast<std::size_t>(k)];
    // 4-point Lagrange on the stencil around t
    const std::ptrdiff_t lo = std::clamp<std::ptrdiff_t>(k - 2, 0, std::max<std::ptrdiff_t>(0, n - 4));
    const std::ptrdiff_t hi = std::min(lo + 4, n);
    double s = 0.0;
    for (std::ptrdiff_t i = lo; i < hi; ++i) {
      double l = 1.0;
      for (std::ptrdiff_t j = lo; j < hi; ++j) {
        if (j != i) l *= (t - ts[static_cast<std::size_t>(j)]) / (ts[static_cast<std::size_t>(i)] - ts[static_cast<std::size_t>(j)]);
      }
      s += l * vs[static_cast<std::size_t>(i)];
    }
    return s;
  };
  return solve(f, y0, a, T, disc, false);
}

double state_l2(const Trajectory& traj, std::size_t it) {
  if (it >= traj.t_grid.size()) fail(ErrorCode::invalid_argument, "time index out of range");
  if (traj.state_kind == StateKind::legendre) {
    const auto& c = traj.states[it];
    return l2_legendre(Eigen::Map<const VectorXd>(c.data(), static_cast<Eigen::Index>(c.size())));
  }
  // trapezoid on the field samples (nodal states coincide with the field)
  const auto row = traj.row(it);
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < row.size(); ++j) {
    const double h = traj.x_grid[j + 1] - traj.x_grid[j];
    s += 0.5 * h * (row[j] * row[j] + row[j + 1] * row[j + 1]);
  }
  return std::sqrt(s);
}

double state_dx_l2(const Trajectory& traj, std::size_t it) {
  if (it >= traj.t_grid.size()) fail(ErrorCode::invalid_argument, "time index out of range");
  if (traj.state_kind == StateKind::legendre) {
    const auto d = legendre_derivative(traj.states[it]);
    VectorXd v(static_cast<Eigen::Index>(d.size()));
    for (std::size_t k = 0; k < d.size(); ++k) v[static_cast<Eigen::Index>(k)] = 2.0 * d[k];
    return l2_legendre(v);
  }
  const auto row = traj.row(it);
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < row.size(); ++j) {
    const double h = traj.x_grid[j + 1] - traj.x_grid[j];
    const double g = (row[j + 1] - row[j]) / h;
    s += h * g * g;
  }
  return std::sqrt(s);
}

Jet spatial_trace_jet(const Trajectory& traj, std::size_t it, int depth) {
  if (traj.state_kind != StateKind::legendre) {
    fail(ErrorCode::invalid_argument, "spatial trace route needs a spectral trajectory");
  }
  if (depth < 0 || depth > kSpatialTraceCap) {
    fail(ErrorCode::depth, "spatial trace depth " + std::to_string(depth) + " exceeds cap " +
                               std::to_string(kSpatialTraceCap));
  }
  if (it >= traj.t_grid.size()) fail(ErrorCode::invalid_argument, "time index out of range");
  std::vector<double> c = traj.states[it];
  std::vector<double> w(static_cast<std::size_t>(depth) + 1);
  double fact = 1.0;
  for (int n = 0; n <= depth; ++n) {
    if (n > 1) fact *= n;
    // d_x^2 at x = 0 (xi = 1), d/dx = 2 d/dxi
    const double d2 = 4.0 * legendre_eval(c, 1.0, 2);
    w[static_cast<std::size_t>(n)] = ((n % 2 == 0) ? d2 : -d2) / fact;
    // c <- P c
    auto d1 = legendre_derivative(c);
    for (double& v : d1) v *= 2.0;
    auto d3 = legendre_derivative(d1);
    for (double& v : d3) v *= 2.0;
    d3 = legendre_derivative(d3);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = 2.0 * d3[k] + traj.a * d1[k];
  }
  return Jet(traj.t_grid[it], std::move(w));
}

ModalTrace::ModalTrace(const Profile& y0, double a, const Discretization& disc, double epsilon)
    : epsilon_(epsilon) {
  disc.validate();
  if (disc.scheme != Scheme::spectral_galerkin) {
    fail(ErrorCode::invalid_argument, "modal trace needs the spectral scheme");
  }
  if (!(epsilon > 0.0)) fail(ErrorCode::invalid_argument, "smoothing time epsilon must be > 0");
  const Galerkin gal(disc.n_x, a);
  const VectorXd c0 = gal.project(y0, 0.0);
  const MatrixXd Mass = gal.G * gal.Phi;
  const MatrixXd K = -gal.GP * gal.Phi;
  const Eigen::LLT<MatrixXd> mass_llt(Mass);
  const MatrixXd A = mass_llt.solve(K);
  // reduced coordinates of the projected initial state: Mass q0 = G c0
  const VectorXd q0 = mass_llt.solve(gal.G * c0);

  Eigen::EigenSolver<MatrixXd> right(A);
  if (right.info() != Eigen::Success) fail(ErrorCode::stability, "eigen-decomposition of the Galerkin operator failed");
  const auto lam = right.eigenvalues();
  const Eigen::MatrixXcd V = right.eigenvectors();

  // second x-derivative at x = 0 of each Legendre mode: 4 P_j''(1)
  VectorXd d2(gal.size());
  for (int j = 0; j < gal.size(); ++j) d2[j] = 0.5 * (j - 1.0) * j * (j + 1.0) * (j + 2.0);
  const Eigen::RowVectorXcd trace_row = (d2.transpose() * gal.Phi).cast<std::complex<double>>();

  // Left eigenvector for each lambda_k by shifted inverse iteration on A^T, so the pairing
  // with the right eigenvector is by construction.
  const Eigen::Index m = A.rows();
  const Eigen::MatrixXcd At = A.transpose().cast<std::complex<double>>();
  const Eigen::VectorXcd q = q0.cast<std::complex<double>>();
  for (Eigen::Index k = 0; k < m; ++k) {
    const std::complex<double> shift = lam[k] * (1.0 + 1e-12) + 1e-12;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(At - shift * Eigen::MatrixXcd::Identity(m, m));
    Eigen::VectorXcd u = Eigen::VectorXcd::Ones(m);
    for (int it = 0; it < 3; ++it) {
      u = lu.solve(u);
      u /= u.norm();
    }
    const auto v = V.col(k);
    const std::complex<double> num = (u.transpose() * q)(0, 0);
    const std::complex<double> den = (u.transpose() * v)(0, 0);
    lambda_.push_back(lam[k]);
    weight_.push_back(num / den * (trace_row * v)(0, 0));
  }
}

double ModalTrace::spectral_abscissa() const {
  double m = -INFINITY;
  for (const auto& l : lambda_) m = std::max(m, l.real());
  return m;
}

Jet ModalTrace::jet(double t, int depth) const {
  if (t < epsilon_) {
    fail(ErrorCode::roughness, "trace jets requested at t = " + std::to_string(t) + " before the smoothing time " +
                                   std::to_string(epsilon_));
  }
  if (depth < 0 || depth > kModalTraceCap) {
    fail(ErrorCode::depth, "modal trace depth " + std::to_string(depth) + " exceeds cap " +
                               std::to_string(kModalTraceCap));
  }
  std::vector<double> c(static_cast<std::size_t>(depth) + 1, 0.0);
  for (std::size_t k = 0; k < lambda_.size(); ++k) {
    if (weight_[k] == 0.0) continue;
    const std::complex<double> log_lam = std::log(lambda_[k]);
    const std::complex<double> log_w = std::log(weight_[k]);
    for (int n = 0; n <= depth; ++n) {
      const std::complex<double> e = std::exp(log_w + lambda_[k] * t + static_cast<double>(n) * log_lam -
                                              std::lgamma(n + 1.0));
      c[static_cast<std::size_t>(n)] += e.real();
    }
  }
  return Jet(t, std::move(c));
}

TraceSource ModalTrace::source(double T, int max_depth) const {
  if (max_depth < 0 || max_depth > kModalTraceCap) {
    fail(ErrorCode::depth, "modal trace depth " + std::to_string(max_depth) + " exceeds cap " +
                               std::to_string(kModalTraceCap));
  }
  TraceSource src;
  src.jets = [self = *this](double t, int depth) { return self.jet(t, depth); };
  src.t_begin = epsilon_;
  src.t_end = T;
  src.max_depth = max_depth;
  return src;
}

EnergyReport energy_report(const Trajectory& traj, double smoothing_t_lo) {
  if (traj.state_kind == StateKind::none) fail(ErrorCode::invalid_argument, "energy report needs solver states");
  EnergyReport rep;
  rep.smoothing_t_lo = smoothing_t_lo;
  const std::size_t nt = traj.t_grid.size();
  std::vector<double> dx(nt);
  for (std::size_t k = 0; k < nt; ++k) {
    const double l2 = state_l2(traj, k);
    dx[k] = state_dx_l2(traj, k);
    rep.l2_norms.push_back(l2);
    rep.h1_norms.push_back(std::sqrt(l2 * l2 + dx[k] * dx[k]));
  }
  rep.y0_l2 = rep.l2_norms.front();
  for (std::size_t k = 0; k + 1 < nt; ++k) {
    const double dt = traj.t_grid[k + 1] - traj.t_grid[k];
    rep.dissipation_integral += 0.5 * dt * (dx[k] * dx[k] + dx[k + 1] * dx[k + 1]);
    if (rep.l2_norms[k] > 0.0) {
      rep.max_step_growth = std::max(rep.max_step_growth, rep.l2_norms[k + 1] / rep.l2_norms[k] - 1.0);
    }
  }
  const double T = traj.t_grid.back();
  rep.kato_bound = (traj.a * T + 1.0) / 3.0 * rep.y0_l2 * rep.y0_l2;
  rep.kato_ratio = rep.kato_bound > 0.0 ? rep.dissipation_integral / rep.kato_bound : 0.0;
  if (rep.y0_l2 > 0.0) {
    for (std::size_t k = 0; k < nt; ++k) {
      const double t = traj.t_grid[k];
      if (t < smoothing_t_lo) continue;
      rep.smoothing_constant = std::max(rep.smoothing_constant, std::sqrt(t) * rep.h1_norms[k] / rep.y0_l2);
    }
  }
  return rep;
}

}  // namespace kdvflat
