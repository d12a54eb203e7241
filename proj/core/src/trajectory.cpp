#include "kdvflat/trajectory.hpp"

#include "kdvflat/error.hpp"

namespace kdvflat {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n < 2) fail(ErrorCode::invalid_argument, "linspace needs at least two points");
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
  v.back() = hi;
  return v;
}

}  // namespace kdvflat
