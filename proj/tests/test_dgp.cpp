#include <gtest/gtest.h>

#include <cmath>

#include "cusum_lp/dgp.hpp"
#include "cusum_lp/variance.hpp"
#include "oracles.hpp"

using namespace cusum_lp;

namespace {

std::vector<double> values(const time_series& s) { return {s.values().begin(), s.values().end()}; }

double lag1_autocorrelation(const std::vector<double>& x) {
  const double m = oracle::mean(x);
  double num = 0, den = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    den += (x[i] - m) * (x[i] - m);
    if (i) num += (x[i] - m) * (x[i - 1] - m);
  }
  return num / den;
}

// Long-run variance by non-overlapping batch means.
double batch_means_lrv(const std::vector<double>& x, std::size_t batch) {
  const std::size_t k = x.size() / batch;
  const double m = oracle::mean(x);
  double s = 0;
  for (std::size_t b = 0; b < k; ++b) {
    double sum = 0;
    for (std::size_t i = 0; i < batch; ++i) sum += x[b * batch + i];
    const double z = sum / batch - m;
    s += z * z;
  }
  return batch * s / (k - 1);
}

}  // namespace

TEST(GenerateSeries, IidMeanIsZero) {
  const auto x = values(generate_series(iid_normal{1.0}, {}, 10000, 1));
  EXPECT_NEAR(oracle::mean(x), 0.0, 0.03);
  EXPECT_NEAR(oracle::variance(x), 1.0, 0.05);
}

TEST(GenerateSeries, Ar1Autocorrelation) {
  const auto x = values(generate_series(ar1{0.5, 1.0}, {}, 10000, 2));
  EXPECT_NEAR(lag1_autocorrelation(x), 0.5, 0.03);
}

TEST(GenerateSeries, MeanShiftAtChangePoint) {
  const std::size_t n = 10000;
  const auto x = values(generate_series(iid_normal{1.0}, {n / 2, 2.0, 0.0}, n, 3));
  const std::vector<double> first(x.begin(), x.begin() + n / 2), second(x.begin() + n / 2, x.end());
  EXPECT_NEAR(oracle::mean(second) - oracle::mean(first), 2.0, 0.1);

  const auto y = values(generate_series(iid_normal{1.0}, {std::nullopt, 5.0, 10.0}, 2000, 3));
  EXPECT_NEAR(oracle::mean(y), 10.0, 0.1);
}

TEST(GenerateSeries, SeedDeterminism) {
  for (const noise_model& m : std::vector<noise_model>{iid_normal{}, iid_student_t{5, 1}, ar1{0.3, 2},
                                                       moving_average{{0.5, -0.2}, 1}, bernoulli_shift_ar{0.7, 1}}) {
    EXPECT_EQ(values(generate_series(m, {}, 300, 11)), values(generate_series(m, {}, 300, 11))) << describe(m);
    EXPECT_NE(values(generate_series(m, {}, 300, 11)), values(generate_series(m, {}, 300, 12))) << describe(m);
  }
}

TEST(GenerateSeries, MovingAverageStructure) {
  const auto x = values(generate_series(moving_average{{0.5}, 1.0}, {}, 50000, 4));
  EXPECT_NEAR(oracle::variance(x), 1.25, 0.05);
  EXPECT_NEAR(lag1_autocorrelation(x), 0.4, 0.02);
}

TEST(GenerateSeries, StudentTVariance) {
  const auto x = values(generate_series(iid_student_t{8.0, 1.0}, {}, 100000, 5));
  EXPECT_NEAR(oracle::variance(x), 8.0 / 6.0, 0.06);
}

TEST(GenerateSeries, Errors) {
  auto kind_of = [](auto&& f) {
    try {
      f();
    } catch (const error& e) {
      return e.kind();
    }
    return error_kind::io;
  };
  EXPECT_EQ(kind_of([] { (void)generate_series(ar1{1.0, 1.0}, {}, 10, 1); }), error_kind::invalid_model);
  EXPECT_EQ(kind_of([] { (void)generate_series(iid_normal{0.0}, {}, 10, 1); }), error_kind::invalid_model);
  EXPECT_EQ(kind_of([] { (void)generate_series(iid_student_t{2.0, 1.0}, {}, 10, 1); }), error_kind::invalid_model);
  EXPECT_EQ(kind_of([] { (void)generate_series(bernoulli_shift_ar{1.2, 1.0}, {}, 10, 1); }),
            error_kind::invalid_model);
  EXPECT_EQ(kind_of([] { (void)generate_series(iid_normal{}, {10, 1.0, 0.0}, 10, 1); }), error_kind::invalid_model);
  EXPECT_EQ(kind_of([] { (void)generate_series(iid_normal{}, {0, 1.0, 0.0}, 10, 1); }), error_kind::invalid_model);
}

TEST(TrueLrv, AnalyticValues) {
  EXPECT_DOUBLE_EQ(*true_lrv(ar1{0.5, 1.0}), 4.0);
  EXPECT_DOUBLE_EQ(*true_lrv(iid_normal{2.0}), 4.0);
  EXPECT_DOUBLE_EQ(*true_lrv(moving_average{{0.5}, 1.0}), 2.25);
  EXPECT_DOUBLE_EQ(*true_lrv(iid_student_t{5.0, 1.0}), 5.0 / 3.0);
  EXPECT_FALSE(true_lrv(bernoulli_shift_ar{0.5, 1.0}).has_value());
}

TEST(TrueLrv, MatchesEstimatorOnLongSeries) {
  for (const noise_model& m : std::vector<noise_model>{iid_normal{1.5}, ar1{0.5, 1}, ar1{-0.4, 1},
                                                       moving_average{{0.5}, 1}, iid_student_t{6, 1}}) {
    const auto est = estimate_lrv(generate_series(m, {}, 100000, 21)).sigma2;
    EXPECT_NEAR(est, *true_lrv(m), 0.1 * *true_lrv(m)) << describe(m);
  }
  // no closed form: compare two estimators
  const auto x = generate_series(bernoulli_shift_ar{0.6, 1}, {}, 200000, 22);
  EXPECT_NEAR(estimate_lrv(x).sigma2, batch_means_lrv(values(x), 400), 0.1 * batch_means_lrv(values(x), 400));
}
