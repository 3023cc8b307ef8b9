#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cusum_lp/quadrature.hpp"

using cusum_lp::quadrature::integrate;

TEST(Quadrature, PolynomialsAreExact) {
  const auto r = integrate([](double x) { return 3 * x * x - 2 * x + 1; }, -1.0, 2.0, 1e-14);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, 9.0 - 3.0 + 3.0, 1e-13);
  // degree 22 < 3*15+1, one panel suffices
  const auto high = integrate([](double x) { return std::pow(x, 22); }, 0.0, 1.0, 1e-15);
  EXPECT_NEAR(high.value, 1.0 / 23.0, 1e-15);
}

TEST(Quadrature, EndpointSingularity) {
  const auto r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-12, 1e-12, 5000);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, 2.0, 1e-10);
  const auto s = integrate([](double t) { return 1.0 / std::sqrt(t * (1 - t)); }, 0.0, 0.5, 1e-12, 0.0, 5000);
  EXPECT_NEAR(2.0 * s.value, std::numbers::pi, 1e-9);
}

TEST(Quadrature, OscillatoryAndReversed) {
  const auto r = integrate([](double x) { return std::sin(50 * x); }, 0.0, std::numbers::pi, 1e-13);
  EXPECT_NEAR(r.value, 0.0, 1e-12);
  const auto e = integrate([](double x) { return std::exp(x); }, 0.0, 3.0, 0.0, 1e-14);
  EXPECT_NEAR(e.value, std::expm1(3.0), 1e-12);
}

TEST(Quadrature, ReportsNonConvergence) {
  // divergent integral with a tiny panel budget
  const auto r = integrate([](double x) { return 1.0 / x; }, 0.0, 1.0, 1e-12, 0.0, 10);
  EXPECT_FALSE(r.converged);
  EXPECT_GT(r.error, 1e-12);
}
