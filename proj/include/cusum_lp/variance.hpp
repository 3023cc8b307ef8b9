#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cusum_lp/error.hpp"
#include "cusum_lp/time_series.hpp"

namespace cusum_lp {

enum class lrv_kernel { bartlett, parzen, flat_top };
enum class demeaning { full_sample, split_half };

inline std::string to_string(lrv_kernel k) {
  switch (k) {
    case lrv_kernel::bartlett: return "bartlett";
    case lrv_kernel::parzen: return "parzen";
    case lrv_kernel::flat_top: return "flat-top";
  }
  return "unknown";
}

inline std::string to_string(demeaning d) {
  return d == demeaning::full_sample ? "full" : "split-half";
}

/// Long-run variance estimator settings. An empty bandwidth selects the
/// plug-in rule of auto_bandwidth.
struct lrv_config {
  lrv_kernel kernel = lrv_kernel::bartlett;
  std::optional<double> bandwidth;
  demeaning demean = demeaning::full_sample;
};

struct lrv_estimate {
  double sigma2 = 0.0;
  double bandwidth = 0.0;
  bool degenerate = false;  ///< all autocovariances vanished; sigma2 is the floor
};

[[nodiscard]] inline double kernel_weight(lrv_kernel k, double x) noexcept {
  x = std::abs(x);
  switch (k) {
    case lrv_kernel::bartlett:
      return x <= 1.0 ? 1.0 - x : 0.0;
    case lrv_kernel::parzen:
      if (x <= 0.5) return 1.0 - 6.0 * x * x + 6.0 * x * x * x;
      if (x <= 1.0) return 2.0 * (1.0 - x) * (1.0 - x) * (1.0 - x);
      return 0.0;
    case lrv_kernel::flat_top:
      if (x <= 0.5) return 1.0;
      if (x <= 1.0) return 2.0 * (1.0 - x);
      return 0.0;
  }
  return 0.0;
}

namespace detail {

inline std::vector<double> demeaned(const time_series& series, demeaning mode) {
  const auto x = series.values();
  std::vector<double> e(x.begin(), x.end());
  auto centre = [](std::span<double> part) {
    if (part.empty()) return;
    bool constant = std::all_of(part.begin(), part.end(), [&](double v) { return v == part.front(); });
    if (constant) {
      std::fill(part.begin(), part.end(), 0.0);
      return;
    }
    double mean = 0.0;
    for (double v : part) mean += v;
    mean /= static_cast<double>(part.size());
    for (double& v : part) v -= mean;
  };
  if (mode == demeaning::full_sample) {
    centre(e);
  } else {
    const std::size_t half = e.size() / 2;
    centre(std::span<double>(e).first(half));
    centre(std::span<double>(e).subspan(half));
  }
  return e;
}

inline double autocovariance(std::span<const double> e, std::size_t lag) {
  double s = 0.0;
  for (std::size_t i = lag; i < e.size(); ++i) s += e[i] * e[i - lag];
  return s / static_cast<double>(e.size());
}

/// Plug-in bandwidth from an AR(1) pilot fitted to residuals e.
inline double plug_in_bandwidth(std::span<const double> e, lrv_kernel kernel) {
  const auto n = static_cast<double>(e.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 1; i < e.size(); ++i) {
    num += e[i] * e[i - 1];
    den += e[i - 1] * e[i - 1];
  }
  double rho = den > 0.0 ? num / den : 0.0;
  rho = std::clamp(rho, -0.99, 0.99);
  double h = 0.0;
  if (kernel == lrv_kernel::parzen) {
    const double alpha2 = 4.0 * rho * rho / std::pow(1.0 - rho, 4);
    h = 2.6614 * std::pow(alpha2 * n, 0.2);
  } else {
    const double alpha1 =
        4.0 * rho * rho / ((1.0 - rho) * (1.0 - rho) * (1.0 + rho) * (1.0 + rho));
    h = 1.1447 * std::cbrt(alpha1 * n);
  }
  return std::clamp(std::floor(h), 1.0, std::max(1.0, std::floor(std::sqrt(n))));
}

}  // namespace detail

/// Andrews-style plug-in bandwidth with an AR(1) pilot on the full-sample
/// demeaned series, clamped to [1, sqrt(N)].
[[nodiscard]] inline double auto_bandwidth(const time_series& series, lrv_kernel kernel) {
  detail::require(series.size() >= 4, error_kind::insufficient_data,
                  "bandwidth selection needs N >= 4");
  return detail::plug_in_bandwidth(detail::demeaned(series, demeaning::full_sample), kernel);
}

/// Kernel estimate gamma(0) + 2 sum_{j=1}^{h} K(j/h) gamma(j) of the long-run
/// variance, floored at 1e-12 gamma(0) (and at the smallest normal double).
[[nodiscard]] inline lrv_estimate estimate_lrv(const time_series& series, const lrv_config& config = {}) {
  const std::size_t n = series.size();
  detail::require(n >= 4, error_kind::insufficient_data, "long-run variance needs N >= 4");
  const auto e = detail::demeaned(series, config.demean);

  double h = 0.0;
  if (config.bandwidth) {
    h = *config.bandwidth;
    detail::require(h >= 1.0 && h <= static_cast<double>(n - 1), error_kind::invalid_parameter,
                    "bandwidth must lie in [1, N-1]");
  } else {
    h = detail::plug_in_bandwidth(e, config.kernel);
  }

  const double gamma0 = detail::autocovariance(e, 0);
  double s = gamma0;
  const auto lags = static_cast<std::size_t>(std::floor(h));
  for (std::size_t j = 1; j <= lags && j < n; ++j) {
    const double k = kernel_weight(config.kernel, static_cast<double>(j) / h);
    if (k != 0.0) s += 2.0 * k * detail::autocovariance(e, j);
  }

  const double floor = std::max(1e-12 * gamma0, std::numeric_limits<double>::min());
  lrv_estimate out{s, h, gamma0 == 0.0};
  if (out.sigma2 < floor) out.sigma2 = floor;
  return out;
}

}  // namespace cusum_lp
