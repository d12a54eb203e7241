#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace kdvflat {

/// A function of x on [-1, 0] (initial data, targets).
using Profile = std::function<double(double x)>;

enum class Provenance { series, pde_solver };

/// How Trajectory::states encodes the discrete solution.
enum class StateKind {
  none,      ///< only the sampled field is available
  legendre,  ///< Legendre coefficients in xi = 2x + 1
  nodal,     ///< values on the uniform grid x_j = -1 + j/J, j = 0..J
};

/// Space-time field y(x, t) on a tensor grid, row-major in t.
struct Trajectory {
  std::vector<double> x_grid;
  std::vector<double> t_grid;
  std::vector<double> field;  ///< field[it * x_grid.size() + ix]
  Provenance provenance = Provenance::series;
  double a = 0.0;

  StateKind state_kind = StateKind::none;
  std::vector<std::vector<double>> states;  ///< one per t_grid entry when state_kind != none

  double y(std::size_t it, std::size_t ix) const { return field[it * x_grid.size() + ix]; }
  double& y(std::size_t it, std::size_t ix) { return field[it * x_grid.size() + ix]; }
  /// Row of the field at time index it.
  std::vector<double> row(std::size_t it) const {
    const auto n = x_grid.size();
    return {field.begin() + static_cast<std::ptrdiff_t>(it * n),
            field.begin() + static_cast<std::ptrdiff_t>((it + 1) * n)};
  }
};

/// Sampled boundary control u(t) = y(-1, t).
struct ControlSignal {
  std::vector<double> times;
  std::vector<double> values;
  int depth = 0;             ///< truncation order N of the series
  double tail_bound = 0.0;   ///< bound on the dropped tail at x = -1
};

/// Uniformly spaced samples lo, ..., hi (n >= 2).
std::vector<double> linspace(double lo, double hi, std::size_t n);

}  // namespace kdvflat
