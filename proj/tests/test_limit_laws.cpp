#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cusum_lp/limit_laws.hpp"
#include "oracles.hpp"

using namespace cusum_lp;

namespace {

double sample_mean(const std::vector<double>& d) { return oracle::mean(d); }

// Cramer-von Mises 95% point by a coarse, separately coded bridge simulation:
// random walk bridge on 512 steps, plain Riemann sum, 20000 paths.
double coarse_cvm_quantile() {
  std::mt19937_64 gen(2024);
  std::normal_distribution<double> d;
  const int m = 512;
  std::vector<double> draws;
  std::vector<double> w(m + 1);
  for (int r = 0; r < 20000; ++r) {
    w[0] = 0;
    for (int j = 1; j <= m; ++j) w[j] = w[j - 1] + d(gen) / std::sqrt(double(m));
    double s = 0;
    for (int j = 1; j < m; ++j) {
      const double b = w[j] - (double(j) / m) * w[m];
      s += b * b;
    }
    draws.push_back(s / m);
  }
  std::sort(draws.begin(), draws.end());
  return draws[static_cast<std::size_t>(0.95 * draws.size())];
}

}  // namespace

TEST(BrownianBridge, EndpointsAreExactlyZero) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto b = sample_brownian_bridge(4 + seed, seed);
    EXPECT_EQ(b.front(), 0.0);
    EXPECT_EQ(b.back(), 0.0);
  }
  EXPECT_THROW((void)sample_brownian_bridge(1, 1), error);
}

TEST(BrownianBridge, SecondMoments) {
  const std::size_t reps = 100000;
  double v_half = 0.0, cov = 0.0, m_half = 0.0;
  auto engine = make_engine(99, 0);
  std::vector<double> b(5);
  for (std::size_t i = 0; i < reps; ++i) {
    fill_brownian_bridge(engine, std::span<double>(b));
    m_half += b[2];
    v_half += b[2] * b[2];
    cov += b[1] * b[3];
  }
  EXPECT_NEAR(m_half / reps, 0.0, 0.01);
  EXPECT_NEAR(v_half / reps, 0.25, 0.01);
  EXPECT_NEAR(cov / reps, 0.0625, 0.01);
}

TEST(SampleLimitGeneral, CramerVonMisesMeanAndQuantile) {
  const auto s = sample_limit_general(2.0, weight_spec::uniform(), 4096, 100000, 7);
  EXPECT_NEAR(sample_mean(s.draws), 1.0 / 6.0, 0.005);
  EXPECT_NEAR(critical_value(s, 0.05), 0.4614, 0.01);
  EXPECT_NEAR(critical_value(s, 0.05), coarse_cvm_quantile(), 0.015);
  EXPECT_TRUE(std::is_sorted(s.draws.begin(), s.draws.end()));
  EXPECT_GT(s.endpoint_bias_bound, 0.0);
  EXPECT_LT(s.endpoint_bias_bound, 1e-6);
}

TEST(SampleLimitGeneral, AbsoluteMeanForPOne) {
  const auto s = sample_limit_general(1.0, weight_spec::uniform(), 4096, 100000, 8);
  EXPECT_NEAR(sample_mean(s.draws), std::sqrt(2.0 / std::numbers::pi) * std::numbers::pi / 8.0, 0.005);
}

TEST(SampleLimitGeneral, WeightedMeanMatchesFubini) {
  // E int |B|^p / w = b(p) int (t(1-t))^{p/2 - q} dt; p=2, q=1.5 gives b(2) * pi
  const auto s = sample_limit_general(2.0, weight_spec::power(1.5), 2048, 20000, 9);
  EXPECT_NEAR(sample_mean(s.draws), std::numbers::pi, 0.05);
}

TEST(SampleLimitGeneral, ReproducibleAndSeedSensitive) {
  const auto a = sample_limit_general(2.0, weight_spec::power(0.5), 64, 500, 3);
  const auto b = sample_limit_general(2.0, weight_spec::power(0.5), 64, 500, 3);
  const auto c = sample_limit_general(2.0, weight_spec::power(0.5), 64, 500, 4);
  EXPECT_EQ(a.draws, b.draws);
  EXPECT_NE(a.draws, c.draws);
}

TEST(SampleLimitGeneral, GridRefinementIsStable) {
  const auto coarse = sample_limit_general(2.0, weight_spec::uniform(), 1024, 20000, 10);
  const auto fine = sample_limit_general(2.0, weight_spec::uniform(), 4096, 20000, 11);
  EXPECT_LT(ks_distance(coarse.draws, fine.draws), 0.02);
}

TEST(SampleLimitGeneral, Errors) {
  EXPECT_THROW((void)sample_limit_general(2.0, weight_spec::power(2.0), 64, 10, 1), error);
  EXPECT_THROW((void)sample_limit_general(2.0, weight_spec::uniform(), 3, 10, 1), error);
  EXPECT_THROW((void)sample_limit_general(2.0, weight_spec::trimmed_power(3, 0.1, 0.9), 64, 10, 1), error);
}

TEST(CriticalValue, QuantileRulesAndMonotonicity) {
  limit_sample s;
  for (int i = 1; i <= 101; ++i) s.draws.push_back(i);
  EXPECT_EQ(critical_value(s, 0.05), 96.0);
  EXPECT_EQ(critical_value(s, 0.5), 51.0);
  double prev = critical_value(s, 0.001);
  for (double a : {0.01, 0.05, 0.1, 0.5, 0.9}) {
    EXPECT_LE(critical_value(s, a), prev);
    prev = critical_value(s, a);
  }
  EXPECT_THROW((void)critical_value(s, 0.0), error);
  s.draws.resize(99);
  try {
    (void)critical_value(s, 0.05);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.kind(), error_kind::precision);
  }
}

TEST(CriticalValue, StandardNormal) {
  EXPECT_NEAR(critical_value(standard_normal_law{}, 0.05), 1.6448536269514722, 1e-9);
  EXPECT_NEAR(critical_value(standard_normal_law{}, 0.5), 0.0, 1e-12);
  EXPECT_NEAR(p_value(standard_normal_law{}, 1.6448536269514722), 0.05, 1e-12);
  EXPECT_NEAR(p_value(standard_normal_law{}, 0.0), 0.5, 1e-15);
}

TEST(PValue, OrderStatisticBounds) {
  const auto s = sample_limit_general(2.0, weight_spec::uniform(), 32, 2000, 12);
  const double r = static_cast<double>(s.draws.size());
  EXPECT_NEAR(p_value(s, s.draws.front() - 1.0), 1.0, 1.0 / (r + 1));
  EXPECT_EQ(p_value(s, s.draws.back() + 1.0), 1.0 / (r + 1));
  EXPECT_NEAR(p_value(s, s.draws[s.draws.size() / 2]), 0.5, 2.0 / std::sqrt(r));
  for (double x : {0.05, 0.1, 0.2, 0.4}) EXPECT_GE(p_value(s, x), p_value(s, x + 0.05));
}

TEST(SampleFb, SingleIntegralMean) {
  const auto s = sample_wiener_tail(2.0, 3.0, 1e-3, 10000, 1e-3, 13);
  const double t = *s.truncation_horizon;
  EXPECT_GE(t, 100.0);
  EXPECT_NEAR(sample_mean(s.draws), 1.0 - 1.0 / t, 0.05);
  // p=3, kappa=4: b(3)/(e) (1 - T^{-e}) with e = 1.5
  const auto s3 = sample_wiener_tail(3.0, 4.0, 2e-3, 10000, 1e-3, 14);
  const double e = 1.5;
  const double b3 = 2.0 * std::sqrt(2.0 / std::numbers::pi);
  EXPECT_NEAR(sample_mean(s3.draws), b3 / e * (1.0 - std::pow(*s3.truncation_horizon, -e)), 0.05);
}

TEST(SampleFb, SymmetricMeanIsTwo) {
  const auto s = sample_fb(2.0, 3.0, 1.0, 1.0, 1e-3, 10000, 1e-3, 15);
  EXPECT_GE(*s.truncation_horizon, 100.0);
  EXPECT_NEAR(sample_mean(s.draws), 2.0, 0.05);
}

TEST(SampleFb, TailToleranceMonotone) {
  const auto a = sample_wiener_tail(2.0, 3.0, 1e-3, 4000, 2e-3, 16);
  const auto b = sample_wiener_tail(2.0, 3.0, 1e-3, 4000, 1e-3, 16);
  EXPECT_GT(*b.truncation_horizon, *a.truncation_horizon);
  // same seed, same grid prefix: the paths agree up to the shorter horizon, so
  // the means differ by the extra tail only
  const double shift = sample_mean(b.draws) - sample_mean(a.draws);
  EXPECT_GT(shift, 0.0);
  EXPECT_LT(shift, 2e-3);
}

TEST(SampleFb, GammaScalingAndExchangeability) {
  const auto ab = sample_fb(2.0, 3.5, 1.0, 2.0, 2e-3, 20000, 1e-3, 17);
  const auto ba = sample_fb(2.0, 3.5, 2.0, 1.0, 2e-3, 20000, 1e-3, 18);
  EXPECT_LT(ks_distance(ab.draws, ba.draws), 0.02);
  const auto one = sample_fb(2.0, 3.5, 1.0, 1.0, 2e-3, 20000, 1e-3, 17);
  EXPECT_NEAR(sample_mean(ab.draws) / sample_mean(one.draws), (1.0 + std::pow(2.0, 1.5)) / 2.0, 0.05);
}

TEST(SampleFb, Errors) {
  try {
    (void)sample_fb(2.0, 2.0, 1.0, 1.0, 1e-3, 10, 1e-3, 1);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.kind(), error_kind::divergent_limit);
  }
  EXPECT_THROW((void)sample_fb(2.0, 3.0, 0.0, 1.0, 1e-3, 10, 1e-3, 1), error);
  EXPECT_THROW((void)sample_fb(2.0, 3.0, 1.0, 1.0, 0.0, 10, 1e-3, 1), error);
  EXPECT_THROW((void)sample_wiener_tail(2.0, 3.0, 1e-3, 10, 0.0, 1), error);
}

TEST(KsDistance, Basics) {
  const std::vector<double> a{1, 2, 3, 4}, b{5, 6}, c{1, 2, 3, 4};
  EXPECT_EQ(ks_distance(a, b), 1.0);
  EXPECT_EQ(ks_distance(a, c), 0.0);
  const std::vector<double> d{2.5};
  EXPECT_EQ(ks_distance(a, d), 0.5);
}
