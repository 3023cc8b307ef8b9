#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "cusum_lp/error.hpp"
#include "cusum_lp/quadrature.hpp"

namespace cusum_lp {

/// w(t) = 1.
struct uniform_weight {};

/// w(t) = (t(1-t))^q on (0, 1).
struct power_weight {
  double q = 0.0;
};

/// w(t) = (t(1-t))^kappa, integrated over (t1, t2) only.
struct trimmed_power_weight {
  double kappa = 0.0;
  double t1 = 0.0;
  double t2 = 1.0;
};

/// Weight function descriptor. Construct through the named factories, which
/// enforce the parameter invariants.
class weight_spec {
 public:
  using kind_type = std::variant<uniform_weight, power_weight, trimmed_power_weight>;

  weight_spec() = default;

  static weight_spec uniform() { return weight_spec{uniform_weight{}}; }

  static weight_spec power(double q) {
    detail::require(std::isfinite(q) && q >= 0.0, error_kind::invalid_parameter,
                    "power weight exponent must be finite and >= 0");
    return weight_spec{power_weight{q}};
  }

  static weight_spec trimmed_power(double kappa, double t1, double t2) {
    detail::require(std::isfinite(kappa) && kappa > 0.0, error_kind::invalid_parameter,
                    "trimmed weight exponent kappa must be > 0");
    detail::require(0.0 < t1 && t1 < t2 && t2 < 1.0, error_kind::invalid_trim,
                    "trimming requires 0 < t1 < t2 < 1");
    return weight_spec{trimmed_power_weight{kappa, t1, t2}};
  }

  [[nodiscard]] const kind_type& kind() const noexcept { return kind_; }

  [[nodiscard]] bool is_uniform() const noexcept { return std::holds_alternative<uniform_weight>(kind_); }
  [[nodiscard]] bool is_power() const noexcept { return std::holds_alternative<power_weight>(kind_); }
  [[nodiscard]] bool is_trimmed() const noexcept {
    return std::holds_alternative<trimmed_power_weight>(kind_);
  }

  /// Exponent of t(1-t) in the weight: 0, q or kappa.
  [[nodiscard]] double exponent() const noexcept {
    if (auto* p = std::get_if<power_weight>(&kind_)) return p->q;
    if (auto* t = std::get_if<trimmed_power_weight>(&kind_)) return t->kappa;
    return 0.0;
  }

  /// Integration range (0, 1) or the trimmed (t1, t2).
  [[nodiscard]] std::pair<double, double> support() const noexcept {
    if (auto* t = std::get_if<trimmed_power_weight>(&kind_)) return {t->t1, t->t2};
    return {0.0, 1.0};
  }

  /// 1/w(t), or 0 outside the trimmed support.
  [[nodiscard]] double inverse(double t) const noexcept {
    const auto [lo, hi] = support();
    if (t < lo || t > hi) return 0.0;
    const double e = exponent();
    return e == 0.0 ? 1.0 : std::pow(t * (1.0 - t), -e);
  }

  [[nodiscard]] std::string describe() const {
    std::ostringstream os;
    os.precision(17);
    std::visit(
        [&](const auto& w) {
          using T = std::decay_t<decltype(w)>;
          if constexpr (std::is_same_v<T, uniform_weight>) {
            os << "uniform";
          } else if constexpr (std::is_same_v<T, power_weight>) {
            os << "power(q=" << w.q << ")";
          } else {
            os << "trimmed-power(kappa=" << w.kappa << ",t1=" << w.t1 << ",t2=" << w.t2 << ")";
          }
        },
        kind_);
    return os.str();
  }

 private:
  explicit weight_spec(kind_type kind) : kind_(kind) {}

  kind_type kind_{uniform_weight{}};
};

/// Which limit theorem governs a weight.
enum class weight_regime { general, trimmed };

[[nodiscard]] inline weight_regime regime_of(const weight_spec& w) noexcept {
  return w.is_trimmed() ? weight_regime::trimmed : weight_regime::general;
}

/// Integrability of (t(1-t))^{p/2}/w(t) on (0, 1). Power(q) is admissible iff
/// q < p/2 + 1; a trimmed weight is always integrable but falls under the
/// trimmed regime (see regime_of).
[[nodiscard]] inline bool check_weight_admissible(double p, const weight_spec& w) noexcept {
  if (auto* pw = std::get_if<power_weight>(&w.kind())) return pw->q < p / 2.0 + 1.0;
  return true;
}

inline void require_weight_admissible(double p, const weight_spec& w) {
  detail::require(std::isfinite(p) && p >= 1.0, error_kind::invalid_parameter, "p must be >= 1");
  if (!check_weight_admissible(p, w)) {
    std::ostringstream os;
    os.precision(17);
    os << "weight " << w.describe() << " is inadmissible for p=" << p << ": requires q < p/2 + 1 = "
       << p / 2.0 + 1.0;
    detail::fail(error_kind::weight_inadmissible, os.str());
  }
}

namespace detail {

inline constexpr double segment_abs_tol = 1e-12;
inline constexpr double segment_rel_tol = 1e-13;

/// Integral of (t(1-t))^{-e} over [a, b] with 0 < a <= b < 1.
inline double power_integral(double e, double a, double b) {
  if (b <= a) return 0.0;
  if (e == 0.0) return b - a;
  if (e == 0.5) return std::asin(2.0 * b - 1.0) - std::asin(2.0 * a - 1.0);
  if (e == 1.0) return std::log(b / a) + std::log((1.0 - a) / (1.0 - b));
  auto f = [e](double t) { return std::pow(t * (1.0 - t), -e); };
  const auto r = quadrature::integrate(f, a, b, segment_abs_tol, segment_rel_tol);
  if (!r.converged) {
    throw accuracy_error("segment weight integral did not converge", r.value, r.error);
  }
  return r.value;
}

}  // namespace detail

/// Integral of 1/w over the k-th constancy segment [k/(n+1), (k+1)/(n+1)] of
/// the rescaled CUSUM process, clipped to the weight's support.
[[nodiscard]] inline double segment_weight_integral(std::size_t k, std::size_t n, const weight_spec& w) {
  detail::require(n >= 2 && k >= 1 && k + 1 <= n, error_kind::invalid_parameter,
                  "segment index must satisfy 1 <= k <= n-1");
  const double denom = static_cast<double>(n + 1);
  if (w.is_uniform()) return 1.0 / denom;
  const auto [lo, hi] = w.support();
  const double a = std::max(static_cast<double>(k) / denom, lo);
  const double b = std::min(static_cast<double>(k + 1) / denom, hi);
  return detail::power_integral(w.exponent(), a, b);
}

/// segment_weight_integral for every k; entry k holds segment k, entries 0 and
/// n are zero because the rescaled process vanishes there.
[[nodiscard]] inline std::vector<double> segment_integrals(std::size_t n, const weight_spec& w) {
  std::vector<double> out(n + 1, 0.0);
  for (std::size_t k = 1; k < n; ++k) out[k] = segment_weight_integral(k, n, w);
  return out;
}

}  // namespace cusum_lp
