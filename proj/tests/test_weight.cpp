#include <gtest/gtest.h>

#include <cmath>

#include "cusum_lp/weight.hpp"
#include "oracles.hpp"

using namespace cusum_lp;

TEST(SegmentWeightIntegral, UniformIsSegmentLength) {
  for (std::size_t k = 1; k <= 2; ++k) EXPECT_DOUBLE_EQ(segment_weight_integral(k, 3, weight_spec::uniform()), 0.25);
}

TEST(SegmentWeightIntegral, PowerZeroMatchesUniform) {
  for (std::size_t n : {3u, 10u, 101u}) {
    for (std::size_t k = 1; k < n; ++k) {
      EXPECT_NEAR(segment_weight_integral(k, n, weight_spec::power(0.0)),
                  segment_weight_integral(k, n, weight_spec::uniform()), 1e-16);
    }
  }
}

TEST(SegmentWeightIntegral, PowerOneClosedForm) {
  EXPECT_NEAR(segment_weight_integral(1, 3, weight_spec::power(1.0)), std::log(3.0), 1e-14);
}

TEST(SegmentWeightIntegral, AgreesWithSimpsonForGeneralExponents) {
  for (double q : {0.25, 0.5, 0.8, 1.0, 1.3, 1.9, 2.4}) {
    for (std::size_t k : {1u, 4u, 9u}) {
      const double a = k / 11.0, b = (k + 1) / 11.0;
      const double ref = oracle::simpson([q](double t) { return std::pow(t * (1 - t), -q); }, a, b, 20000);
      EXPECT_NEAR(segment_weight_integral(k, 10, weight_spec::power(q)), ref, 1e-11 * ref) << q << " " << k;
    }
  }
}

TEST(SegmentWeightIntegral, TrimmedWeightClipsToSupport) {
  const auto w = weight_spec::trimmed_power(3.0, 0.3, 0.6);
  // n=9: segments have length 0.1
  EXPECT_EQ(segment_weight_integral(1, 9, w), 0.0);
  EXPECT_EQ(segment_weight_integral(7, 9, w), 0.0);
  const auto f = [](double t) { return std::pow(t * (1 - t), -3.0); };
  EXPECT_EQ(segment_weight_integral(2, 9, w), 0.0);
  EXPECT_NEAR(segment_weight_integral(3, 9, w), oracle::simpson(f, 0.3, 0.4, 20000), 1e-10);
  EXPECT_NEAR(segment_weight_integral(5, 9, w), oracle::simpson(f, 0.5, 0.6, 20000), 1e-10);

  const auto table = segment_integrals(9, w);
  ASSERT_EQ(table.size(), 10u);
  EXPECT_EQ(table[0], 0.0);
  EXPECT_EQ(table[9], 0.0);
}

TEST(SegmentWeightIntegral, RejectsBadIndex) {
  EXPECT_THROW((void)segment_weight_integral(0, 3, weight_spec::uniform()), error);
  EXPECT_THROW((void)segment_weight_integral(3, 3, weight_spec::uniform()), error);
}

TEST(WeightAdmissibility, Examples) {
  EXPECT_TRUE(check_weight_admissible(2.0, weight_spec::power(1.0)));
  EXPECT_FALSE(check_weight_admissible(2.0, weight_spec::power(2.0)));
  EXPECT_TRUE(check_weight_admissible(1.0, weight_spec::uniform()));
  EXPECT_TRUE(check_weight_admissible(2.0, weight_spec::trimmed_power(5.0, 0.1, 0.9)));
  EXPECT_EQ(regime_of(weight_spec::trimmed_power(5.0, 0.1, 0.9)), weight_regime::trimmed);
  EXPECT_EQ(regime_of(weight_spec::power(1.0)), weight_regime::general);
}

TEST(WeightAdmissibility, BoundaryProperty) {
  for (double p = 1.0; p <= 6.0; p += 0.25) {
    const double edge = p / 2.0 + 1.0;
    EXPECT_TRUE(check_weight_admissible(p, weight_spec::power(std::nextafter(edge, 0.0))));
    EXPECT_FALSE(check_weight_admissible(p, weight_spec::power(edge)));
  }
  try {
    require_weight_admissible(2.0, weight_spec::power(2.5));
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.kind(), error_kind::weight_inadmissible);
  }
}

TEST(WeightSpec, FactoriesValidate) {
  EXPECT_THROW(weight_spec::power(-0.1), error);
  EXPECT_THROW(weight_spec::power(NAN), error);
  EXPECT_THROW(weight_spec::trimmed_power(3.0, 0.6, 0.4), error);
  EXPECT_THROW(weight_spec::trimmed_power(3.0, 0.0, 0.4), error);
  EXPECT_THROW(weight_spec::trimmed_power(3.0, 0.2, 1.0), error);
  const auto w = weight_spec::power(0.5);
  EXPECT_NEAR(w.inverse(0.5), 2.0, 1e-15);
  EXPECT_EQ(weight_spec::trimmed_power(3.0, 0.2, 0.4).inverse(0.5), 0.0);
}
