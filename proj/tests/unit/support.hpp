#pragma once

#include <optional>
#include <span>

#include <gtest/gtest.h>

#include "kdvflat/error.hpp"

namespace kdvflat::test {

/// Error code thrown by f, or std::nullopt when f returns normally.
template <class F>
std::optional<ErrorCode> error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline void expect_coeffs(std::span<const double> got, std::initializer_list<double> want, double tol = 0.0) {
  ASSERT_EQ(got.size(), want.size());
  std::size_t k = 0;
  for (double w : want) {
    EXPECT_NEAR(got[k], w, tol) << "coefficient " << k;
    ++k;
  }
}

}  // namespace kdvflat::test
