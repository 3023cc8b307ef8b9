#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "cusum_lp/constants.hpp"
#include "cusum_lp/error.hpp"
#include "cusum_lp/parallel.hpp"
#include "cusum_lp/quadrature.hpp"
#include "cusum_lp/rng.hpp"
#include "cusum_lp/weight.hpp"

namespace cusum_lp {

/// Integral of |B(t)|^p / w(t) over (0, 1) for a Brownian bridge B.
struct general_law {
  double p = 2.0;
  weight_spec weight;
};

/// gamma1^e I_1 + gamma2^e I_2 with e = kappa - p/2 - 1 and I_1, I_2 independent
/// copies of the integral of |W(t)|^p / t^kappa over (1, infinity).
struct fb_law {
  double p = 2.0;
  double kappa = 3.0;
  double gamma1 = 1.0;
  double gamma2 = 1.0;
  double grid_step = 1e-3;  ///< relative step of the geometric time grid
  double tail_tol = 1e-3;
};

/// A single integral of |W(t)|^p / t^kappa over (1, infinity).
struct wiener_tail_law {
  double p = 2.0;
  double kappa = 3.0;
  double grid_step = 1e-3;
  double tail_tol = 1e-3;
};

/// Standard normal limit of the Darling-Erdos statistic; no simulation needed.
struct standard_normal_law {};

using law_family = std::variant<general_law, fb_law, wiener_tail_law>;

/// Sorted Monte Carlo draws from a limit law, with the settings that produced them.
struct limit_sample {
  std::vector<double> draws;
  law_family family;
  std::size_t grid_size = 0;  ///< time points per path
  std::size_t replications = 0;
  std::uint64_t seed = 0;
  std::optional<double> truncation_horizon;  ///< T, for the Wiener-tail laws
  double endpoint_bias_bound = 0.0;          ///< general law only
};

/// Brownian bridge at t_j = j / grid_size, j = 0..grid_size, as W(t) - t W(1)
/// from cumulative Gaussian increments.
template <class Engine>
void fill_brownian_bridge(Engine& engine, std::span<double> out) {
  const std::size_t m = out.size() - 1;
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sd = std::sqrt(1.0 / static_cast<double>(m));
  out[0] = 0.0;
  for (std::size_t j = 1; j <= m; ++j) out[j] = out[j - 1] + sd * normal(engine);
  const double end = out[m];
  for (std::size_t j = 1; j < m; ++j) out[j] -= (static_cast<double>(j) / static_cast<double>(m)) * end;
  out[m] = 0.0;
}

[[nodiscard]] inline std::vector<double> sample_brownian_bridge(std::size_t grid_size, std::uint64_t seed) {
  detail::require(grid_size >= 2, error_kind::invalid_parameter, "bridge grid needs at least 2 cells");
  std::vector<double> path(grid_size + 1);
  auto engine = engine_type{seed};
  fill_brownian_bridge(engine, std::span<double>(path));
  return path;
}

namespace detail {

inline double fast_pow(double a, double p) { return p == 1.0 ? a : p == 2.0 ? a * a : std::pow(a, p); }

/// Integral over [0, h] of (t(1-t))^a, a > -1. The substitution v = s^{a+1}
/// (t = h s) removes the endpoint singularity.
inline double endpoint_mass(double a, double h) {
  auto f = [&](double v) { return std::pow(1.0 - h * std::pow(v, 1.0 / (a + 1.0)), a); };
  const auto r = quadrature::integrate(f, 0.0, 1.0, 1e-15, 1e-12);
  return std::pow(h, a + 1.0) / (a + 1.0) * r.value;
}

/// Geometric time grid 1 = t_0 < ... < t_m = horizon.
inline std::vector<double> geometric_grid(double horizon, double step) {
  std::vector<double> t{1.0};
  while (t.back() < horizon) t.push_back(std::min(horizon, t.back() * (1.0 + step)));
  return t;
}

/// Horizon T such that the expected omitted tail b(p) T^{-e} / e is below tol.
inline double truncation_horizon(double p, double kappa, double tail_tol) {
  const double e = kappa - p / 2.0 - 1.0;
  return std::max(2.0, std::pow(compute_b(p) / (e * tail_tol), 1.0 / e));
}

/// Trapezoid integral of |W(t)|^p t^{-kappa} along one Wiener path on the grid.
template <class Engine>
double wiener_tail_integral(Engine& engine, std::span<const double> times, std::span<const double> inv_weight,
                            double p) {
  std::normal_distribution<double> normal(0.0, 1.0);
  double w = normal(engine);  // W(1)
  double prev = fast_pow(std::abs(w), p) * inv_weight[0];
  double total = 0.0;
  for (std::size_t j = 1; j < times.size(); ++j) {
    const double dt = times[j] - times[j - 1];
    w += std::sqrt(dt) * normal(engine);
    const double cur = fast_pow(std::abs(w), p) * inv_weight[j];
    total += 0.5 * dt * (prev + cur);
    prev = cur;
  }
  return total;
}

inline void require_tail_law(double p, double kappa, double grid_step, double tail_tol) {
  require(std::isfinite(p) && p >= 1.0, error_kind::invalid_parameter, "p must be >= 1");
  require(kappa > p / 2.0 + 1.0, error_kind::divergent_limit,
          "limit requires kappa > p/2 + 1 = " + std::to_string(p / 2.0 + 1.0));
  require(grid_step > 0.0 && grid_step < 1.0, error_kind::invalid_parameter, "grid step must lie in (0, 1)");
  require(tail_tol > 0.0, error_kind::invalid_parameter, "tail tolerance must be positive");
}

}  // namespace detail

/// Monte Carlo sample of the integral of |B|^p / w over (0, 1).
///
/// Each draw is a trapezoid sum over the interior grid points t_1..t_{M-1}. The
/// two end cells are replaced by their expected contribution
/// b(p) * integral of (t(1-t))^{p/2}/w over the cells; that value doubles as the
/// bias bound stored in the sample.
[[nodiscard]] inline limit_sample sample_limit_general(double p, const weight_spec& weight, std::size_t grid_size,
                                                       std::size_t replications, std::uint64_t seed) {
  require_weight_admissible(p, weight);
  detail::require(!weight.is_trimmed(), error_kind::invalid_parameter,
                  "trimmed weights follow the Wiener-tail limit; use sample_fb");
  detail::require(grid_size >= 4, error_kind::invalid_parameter, "grid needs at least 4 cells");
  detail::require(replications >= 1, error_kind::invalid_parameter, "need at least one replication");

  const std::size_t m = grid_size;
  const double h = 1.0 / static_cast<double>(m);
  std::vector<double> inv_w(m + 1, 0.0);
  for (std::size_t j = 1; j < m; ++j) inv_w[j] = weight.inverse(static_cast<double>(j) * h);
  inv_w[1] *= 0.5;
  inv_w[m - 1] *= 0.5;
  const double compensation = 2.0 * compute_b(p) * detail::endpoint_mass(p / 2.0 - weight.exponent(), h);

  limit_sample out;
  out.family = general_law{p, weight};
  out.grid_size = grid_size;
  out.replications = replications;
  out.seed = seed;
  out.endpoint_bias_bound = compensation;
  out.draws.resize(replications);

  parallel_for(replications, [&](std::size_t i) {
    auto engine = make_engine(seed, i);
    std::vector<double> bridge(m + 1);
    fill_brownian_bridge(engine, std::span<double>(bridge));
    double sum = 0.0;
    for (std::size_t j = 1; j < m; ++j) sum += detail::fast_pow(std::abs(bridge[j]), p) * inv_w[j];
    out.draws[i] = sum * h + compensation;
  });
  std::sort(out.draws.begin(), out.draws.end());
  return out;
}

/// Monte Carlo sample of gamma1^e I_1 + gamma2^e I_2 (see fb_law).
///
/// Each I is integrated on a geometric grid t_{j+1} = t_j (1 + grid_step) up to
/// the horizon T where the expected omitted tail b(p) T^{-e} / e drops below
/// tail_tol.
[[nodiscard]] inline limit_sample sample_fb(double p, double kappa, double gamma1, double gamma2,
                                            double grid_step, std::size_t replications, double tail_tol,
                                            std::uint64_t seed) {
  detail::require_tail_law(p, kappa, grid_step, tail_tol);
  detail::require(gamma1 > 0.0 && gamma2 > 0.0 && std::isfinite(gamma1) && std::isfinite(gamma2),
                  error_kind::invalid_parameter, "gamma1 and gamma2 must be positive and finite");
  detail::require(replications >= 1, error_kind::invalid_parameter, "need at least one replication");

  const double e = kappa - p / 2.0 - 1.0;
  const double horizon = detail::truncation_horizon(p, kappa, tail_tol);
  const auto times = detail::geometric_grid(horizon, grid_step);
  std::vector<double> inv_w(times.size());
  for (std::size_t j = 0; j < times.size(); ++j) inv_w[j] = std::pow(times[j], -kappa);
  const double c1 = std::pow(gamma1, e);
  const double c2 = std::pow(gamma2, e);

  limit_sample out;
  out.family = fb_law{p, kappa, gamma1, gamma2, grid_step, tail_tol};
  out.grid_size = times.size();
  out.replications = replications;
  out.seed = seed;
  out.truncation_horizon = horizon;
  out.draws.resize(replications);

  parallel_for(replications, [&](std::size_t i) {
    auto engine = make_engine(seed, i);
    const double first = detail::wiener_tail_integral(engine, times, inv_w, p);
    const double second = detail::wiener_tail_integral(engine, times, inv_w, p);
    out.draws[i] = c1 * first + c2 * second;
  });
  std::sort(out.draws.begin(), out.draws.end());
  return out;
}

/// Monte Carlo sample of one truncated integral of |W(t)|^p / t^kappa over (1, T).
[[nodiscard]] inline limit_sample sample_wiener_tail(double p, double kappa, double grid_step,
                                                     std::size_t replications, double tail_tol,
                                                     std::uint64_t seed) {
  detail::require_tail_law(p, kappa, grid_step, tail_tol);
  detail::require(replications >= 1, error_kind::invalid_parameter, "need at least one replication");
  const double horizon = detail::truncation_horizon(p, kappa, tail_tol);
  const auto times = detail::geometric_grid(horizon, grid_step);
  std::vector<double> inv_w(times.size());
  for (std::size_t j = 0; j < times.size(); ++j) inv_w[j] = std::pow(times[j], -kappa);

  limit_sample out;
  out.family = wiener_tail_law{p, kappa, grid_step, tail_tol};
  out.grid_size = times.size();
  out.replications = replications;
  out.seed = seed;
  out.truncation_horizon = horizon;
  out.draws.resize(replications);
  parallel_for(replications, [&](std::size_t i) {
    auto engine = make_engine(seed, i);
    out.draws[i] = detail::wiener_tail_integral(engine, times, inv_w, p);
  });
  std::sort(out.draws.begin(), out.draws.end());
  return out;
}

/// Empirical (1 - alpha) quantile, taking the higher order statistic.
[[nodiscard]] inline double critical_value(const limit_sample& sample, double alpha) {
  detail::require(alpha > 0.0 && alpha < 1.0, error_kind::invalid_parameter, "alpha must lie in (0, 1)");
  detail::require(sample.draws.size() >= 100, error_kind::precision,
                  "critical values need at least 100 replications, got " + std::to_string(sample.draws.size()));
  const auto n = sample.draws.size();
  auto idx = static_cast<std::size_t>(std::ceil(static_cast<double>(n - 1) * (1.0 - alpha)));
  return sample.draws[std::min(idx, n - 1)];
}

[[nodiscard]] inline double critical_value(standard_normal_law, double alpha) {
  detail::require(alpha > 0.0 && alpha < 1.0, error_kind::invalid_parameter, "alpha must lie in (0, 1)");
  return boost::math::quantile(boost::math::complement(boost::math::normal_distribution<double>{}, alpha));
}

/// (1 + #{draws >= observed}) / (replications + 1).
[[nodiscard]] inline double p_value(const limit_sample& sample, double observed) {
  detail::require(!sample.draws.empty(), error_kind::invalid_parameter, "empty limit sample");
  const auto below = std::lower_bound(sample.draws.begin(), sample.draws.end(), observed);
  const auto at_or_above = static_cast<double>(sample.draws.end() - below);
  return (1.0 + at_or_above) / (static_cast<double>(sample.draws.size()) + 1.0);
}

[[nodiscard]] inline double p_value(standard_normal_law, double observed) {
  return boost::math::cdf(boost::math::complement(boost::math::normal_distribution<double>{}, observed));
}

/// Two-sample Kolmogorov-Smirnov distance between sorted samples.
[[nodiscard]] inline double ks_distance(std::span<const double> a, std::span<const double> b) {
  detail::require(!a.empty() && !b.empty(), error_kind::invalid_parameter, "KS distance of an empty sample");
  detail::require(std::is_sorted(a.begin(), a.end()) && std::is_sorted(b.begin(), b.end()),
                  error_kind::invalid_parameter, "KS distance expects sorted samples");
  const auto na = static_cast<double>(a.size());
  const auto nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

}  // namespace cusum_lp
