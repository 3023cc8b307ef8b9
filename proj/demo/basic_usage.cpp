// Simulates a series with a mean shift and runs the p = 2 uniform-weight test.

#include <cstdio>

#include "cusum_lp/cusum_lp.hpp"

int main() {
  using namespace cusum_lp;

  const auto series = generate_series(iid_normal{1.0}, change_spec{150, 0.8, 0.0}, 300, 42);
  const auto path = compute_cusum(series);
  const auto sigma2 = estimate_lrv(series, {lrv_kernel::bartlett, std::nullopt, demeaning::split_half}).sigma2;

  const test_spec spec{statistic_family::general_weighted, 2.0, weight_spec::uniform()};
  const statistic_evaluator evaluator(spec, series.size());
  const auto stat = evaluator.evaluate(path, std::sqrt(sigma2));

  const limit_law law = sample_limit_general(2.0, weight_spec::uniform(), 1024, 5000, 7);
  const auto d = decide(stat, law, 0.05);

  std::printf("sigma2_hat = %.4f\n", sigma2);
  std::printf("statistic  = %.4f (critical value %.4f)\n", stat.normalized, d.critical_value);
  std::printf("p-value    = %.4f -> %s\n", d.p_value, d.reject ? "reject H0" : "no evidence of a change");
}
