#pragma once

// Brute-force reference computations used only by the tests. Nothing here
// calls into the library's integration paths.

#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

/// Z(k) = sum_{i<=k} x_i - (k/N) sum x_i, straight from the definition.
inline std::vector<long double> cusum_by_definition(const std::vector<double>& x) {
  const std::size_t n = x.size();
  long double total = 0.0L;
  for (double v : x) total += v;
  std::vector<long double> z(n + 1, 0.0L);
  long double partial = 0.0L;
  for (std::size_t k = 1; k <= n; ++k) {
    partial += x[k - 1];
    z[k] = partial - (static_cast<long double>(k) / static_cast<long double>(n)) * total;
  }
  return z;
}

/// Midpoint rule on `points` cells over [lo, hi] of |Z_N(t)|^p * inv_w(t),
/// Z_N(t) = Z(floor((N+1) t)) / sqrt(N).
inline double riemann_statistic(const std::vector<double>& x, double p, const std::function<double(double)>& inv_w,
                                double lo = 0.0, double hi = 1.0, std::size_t points = 1000000) {
  const auto z = cusum_by_definition(x);
  const std::size_t n = x.size();
  const long double h = (static_cast<long double>(hi) - lo) / static_cast<long double>(points);
  const long double root_n = std::sqrt(static_cast<long double>(n));
  long double sum = 0.0L;
  for (std::size_t j = 0; j < points; ++j) {
    const long double t = lo + (static_cast<long double>(j) + 0.5L) * h;
    const auto k = static_cast<std::size_t>(std::floor(static_cast<long double>(n + 1) * t));
    if (k > n) continue;
    const long double zn = std::abs(z[k]) / root_n;
    if (zn == 0.0L) continue;
    sum += std::pow(zn, static_cast<long double>(p)) * inv_w(static_cast<double>(t));
  }
  return static_cast<double>(sum * h);
}

/// Composite Simpson rule with 2m panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, std::size_t m = 200000) {
  const double h = (b - a) / static_cast<double>(2 * m);
  double s = f(a) + f(b);
  for (std::size_t i = 1; i < 2 * m; ++i) s += f(a + h * static_cast<double>(i)) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

inline std::vector<double> normal_series(std::size_t n, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> d(0.0, scale);
  std::vector<double> x(n);
  for (double& v : x) v = d(gen);
  return x;
}

inline double mean(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

inline double variance(const std::vector<double>& x) {
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size());
}

}  // namespace oracle
