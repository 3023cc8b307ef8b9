#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cusum_lp/error.hpp"
#include "cusum_lp/time_series.hpp"
#include "cusum_lp/weight.hpp"

namespace cusum_lp {

/// Integer-indexed CUSUM values z[k] = sum_{i<=k} x_i - (k/N) sum_{i<=N} x_i.
///
/// The rescaled process is Z_N(t) = z[floor((N+1)t)] / sqrt(N), which is a step
/// function on segments [k/(N+1), (k+1)/(N+1)) and vanishes outside
/// [1/(N+1), N/(N+1)).
class cusum_path {
 public:
  cusum_path(std::vector<double> z, std::size_t n) : z_(std::move(z)), n_(n) {
    detail::require(n_ >= 2 && z_.size() == n_ + 1, error_kind::invalid_input,
                    "cusum path must hold n+1 values for n >= 2");
  }

  [[nodiscard]] std::span<const double> values() const noexcept { return z_; }
  [[nodiscard]] std::size_t n() const noexcept { return n_; }
  [[nodiscard]] double operator[](std::size_t k) const noexcept { return z_[k]; }

  /// Z_N(t) for t in [0, 1].
  [[nodiscard]] double rescaled(double t) const noexcept {
    if (!(t >= 0.0) || t >= 1.0) return 0.0;
    const auto k = static_cast<std::size_t>(std::floor(static_cast<double>(n_ + 1) * t));
    return k <= n_ ? z_[k] / std::sqrt(static_cast<double>(n_)) : 0.0;
  }

 private:
  std::vector<double> z_;
  std::size_t n_;
};

[[nodiscard]] inline cusum_path compute_cusum(const time_series& series) {
  const std::size_t n = series.size();
  std::vector<double> z(n + 1, 0.0);
  if (series.is_constant()) return cusum_path{std::move(z), n};

  // Partial sums of the centred data equal the definition algebraically and
  // keep location shifts from leaking in through rounding.
  double mean = 0.0;
  for (double x : series.values()) mean += x;
  mean /= static_cast<double>(n);
  double running = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    running += series[k - 1] - mean;
    z[k] = running;
  }
  return cusum_path{std::move(z), n};
}

enum class statistic_family { general_weighted, darling_erdos, renyi };

inline std::string to_string(statistic_family f) {
  switch (f) {
    case statistic_family::general_weighted: return "general";
    case statistic_family::darling_erdos: return "darling-erdos";
    case statistic_family::renyi: return "renyi";
  }
  return "unknown";
}

struct statistic_value {
  double raw = 0.0;         ///< the weighted integral itself
  double normalized = 0.0;  ///< compared against the limit law
  statistic_family family = statistic_family::general_weighted;
  double p = 2.0;
  std::optional<double> kappa;  ///< set for renyi only
};

/// Sum over segments of (|z_k|/sqrt(N))^p * segment_integrals[k]. The caller
/// supplies the segment integrals, so any weight (admissible or not) can be used.
[[nodiscard]] inline double integrate_path(const cusum_path& path, double p,
                                           std::span<const double> segment_integrals) {
  detail::require(segment_integrals.size() == path.n() + 1, error_kind::invalid_parameter,
                  "segment integral table does not match the path length");
  const double scale = 1.0 / std::sqrt(static_cast<double>(path.n()));
  double total = 0.0;
  for (std::size_t k = 1; k < path.n(); ++k) {
    const double a = std::abs(path[k]) * scale;
    if (a == 0.0 || segment_integrals[k] == 0.0) continue;
    const double ap = p == 1.0 ? a : p == 2.0 ? a * a : std::pow(a, p);
    total += ap * segment_integrals[k];
  }
  return total;
}

/// Exact integral of |Z_N(t)|^p / w(t) over (0, 1), or over the trimmed support
/// for a trimmed weight.
[[nodiscard]] inline double lp_statistic(const cusum_path& path, double p, const weight_spec& w) {
  require_weight_admissible(p, w);
  const auto table = segment_integrals(path.n(), w);
  return integrate_path(path, p, table);
}

/// Same as lp_statistic with a precomputed segment table (see segment_integrals).
[[nodiscard]] inline double lp_statistic(const cusum_path& path, double p, const weight_spec& w,
                                         std::span<const double> table) {
  require_weight_admissible(p, w);
  return integrate_path(path, p, table);
}

namespace detail {

inline void require_renyi(std::size_t n, double p, double kappa, double t1, double t2) {
  require(std::isfinite(p) && p >= 1.0, error_kind::invalid_parameter, "p must be >= 1");
  require(kappa > p / 2.0 + 1.0, error_kind::divergent_limit,
          "trimmed statistic requires kappa > p/2 + 1 = " + std::to_string(p / 2.0 + 1.0));
  const double lo = 1.0 / static_cast<double>(n + 1);
  const double hi = static_cast<double>(n) / static_cast<double>(n + 1);
  // small relative slack so that t1 = 1/(n+1) computed elsewhere is accepted
  require(t1 < t2 && t1 >= lo * (1.0 - 1e-15) && t2 <= hi * (1.0 + 1e-15), error_kind::invalid_trim,
          "trimming needs 1/(n+1) <= t1 < t2 <= n/(n+1)");
}

}  // namespace detail

/// Integral of |Z_N(t)|^p / (t(1-t))^kappa over [t1, t2], partial segments clipped.
/// No restriction on kappa; renyi_statistic adds the limit-theory checks.
[[nodiscard]] inline double trimmed_integral(const cusum_path& path, double p, double kappa, double t1,
                                             double t2) {
  const auto w = weight_spec::trimmed_power(kappa, t1, t2);
  return integrate_path(path, p, segment_integrals(path.n(), w));
}

/// Trimmed statistic. normalized = r^{kappa - p/2 - 1} * raw / sigma^p with
/// r = min(t1, 1 - t2).
[[nodiscard]] inline statistic_value renyi_statistic(const cusum_path& path, double p, double kappa,
                                                     double t1, double t2, double sigma = 1.0) {
  detail::require_renyi(path.n(), p, kappa, t1, t2);
  detail::require(sigma > 0.0 && std::isfinite(sigma), error_kind::invalid_parameter,
                  "sigma must be positive");
  const double raw = trimmed_integral(path, p, kappa, t1, t2);
  const double r = std::min(t1, 1.0 - t2);
  const double normalized = std::pow(r, kappa - p / 2.0 - 1.0) * raw / std::pow(sigma, p);
  return {raw, normalized, statistic_family::renyi, p, kappa};
}

/// Segment table for the Darling-Erdos weight (t(1-t))^{1+p/2}.
[[nodiscard]] inline std::vector<double> darling_erdos_table(std::size_t n, double p) {
  std::vector<double> out(n + 1, 0.0);
  const double e = 1.0 + p / 2.0;
  const double denom = static_cast<double>(n + 1);
  for (std::size_t k = 1; k < n; ++k) {
    out[k] = detail::power_integral(e, static_cast<double>(k) / denom, static_cast<double>(k + 1) / denom);
  }
  return out;
}

namespace detail {

inline statistic_value darling_erdos_from_raw(double raw, std::size_t n, double p, double sigma, double a_p,
                                              double b_p) {
  const double log_n = std::log(static_cast<double>(n));
  const double normalized = (raw / std::pow(sigma, p) - 2.0 * b_p * log_n) / std::sqrt(4.0 * a_p * log_n);
  return {raw, normalized, statistic_family::darling_erdos, p, std::nullopt};
}

inline void require_darling_erdos(std::size_t n, double p, double sigma, double a_p) {
  require(std::isfinite(p) && p >= 1.0, error_kind::invalid_parameter, "p must be >= 1");
  require(n >= 3, error_kind::insufficient_data, "Darling-Erdos normalization needs N >= 3");
  require(sigma > 0.0 && std::isfinite(sigma), error_kind::invalid_parameter, "sigma must be positive");
  require(a_p > 0.0 && std::isfinite(a_p), error_kind::invalid_parameter, "a(p) must be positive");
}

}  // namespace detail

/// Darling-Erdos statistic: raw = integral of |Z_N|^p / (t(1-t))^{1+p/2},
/// normalized = (4 a_p log N)^{-1/2} (raw / sigma^p - 2 b_p log N).
[[nodiscard]] inline statistic_value darling_erdos_statistic(const cusum_path& path, double p, double sigma,
                                                             double a_p, double b_p) {
  detail::require_darling_erdos(path.n(), p, sigma, a_p);
  const double raw = integrate_path(path, p, darling_erdos_table(path.n(), p));
  return detail::darling_erdos_from_raw(raw, path.n(), p, sigma, a_p, b_p);
}

/// Overload with a precomputed darling_erdos_table.
[[nodiscard]] inline statistic_value darling_erdos_statistic(const cusum_path& path, double p, double sigma,
                                                             double a_p, double b_p,
                                                             std::span<const double> table) {
  detail::require_darling_erdos(path.n(), p, sigma, a_p);
  return detail::darling_erdos_from_raw(integrate_path(path, p, table), path.n(), p, sigma, a_p, b_p);
}

}  // namespace cusum_lp
