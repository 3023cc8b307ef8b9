#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "cusum_lp/error.hpp"
#include "cusum_lp/rng.hpp"
#include "cusum_lp/time_series.hpp"

namespace cusum_lp {

struct iid_normal {
  double s = 1.0;
};
struct iid_student_t {
  double df = 5.0;
  double scale = 1.0;
};
struct ar1 {
  double rho = 0.5;
  double s = 1.0;
};
struct moving_average {
  std::vector<double> coeffs;
  double s = 1.0;
};
/// Stationary solution of e_i = a tanh(e_{i-1}) + s eta_i.
struct bernoulli_shift_ar {
  double a = 0.5;
  double s = 1.0;
};

using noise_model = std::variant<iid_normal, iid_student_t, ar1, moving_average, bernoulli_shift_ar>;

/// Mean mu0 before the change, mu0 + delta after observation k_star.
struct change_spec {
  std::optional<std::size_t> k_star;
  double delta = 0.0;
  double mu0 = 0.0;
};

inline constexpr std::size_t burn_in_steps = 1000;

inline void validate(const noise_model& noise) {
  using detail::require;
  constexpr auto bad = error_kind::invalid_model;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, iid_normal>) {
          require(m.s > 0.0 && std::isfinite(m.s), bad, "noise scale must be positive");
        } else if constexpr (std::is_same_v<T, iid_student_t>) {
          require(m.df > 2.0 && std::isfinite(m.df), bad, "Student t needs df > 2 for finite variance");
          require(m.scale > 0.0 && std::isfinite(m.scale), bad, "noise scale must be positive");
        } else if constexpr (std::is_same_v<T, ar1>) {
          require(std::abs(m.rho) < 1.0, bad, "AR(1) needs |rho| < 1");
          require(m.s > 0.0 && std::isfinite(m.s), bad, "noise scale must be positive");
        } else if constexpr (std::is_same_v<T, moving_average>) {
          for (double c : m.coeffs) require(std::isfinite(c), bad, "MA coefficients must be finite");
          require(m.s > 0.0 && std::isfinite(m.s), bad, "noise scale must be positive");
        } else {
          require(std::abs(m.a) < 1.0, bad, "Bernoulli shift needs |a| < 1");
          require(m.s > 0.0 && std::isfinite(m.s), bad, "noise scale must be positive");
        }
      },
      noise);
}

inline std::string describe(const noise_model& noise) {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, iid_normal>) return "iid-normal";
        else if constexpr (std::is_same_v<T, iid_student_t>) return "student-t";
        else if constexpr (std::is_same_v<T, ar1>) return "ar1";
        else if constexpr (std::is_same_v<T, moving_average>) return "ma";
        else return "bernoulli-shift";
      },
      noise);
}

/// Zero-mean errors e_1..e_n drawn from engine.
template <class Engine>
std::vector<double> generate_noise(const noise_model& noise, std::size_t n, Engine& engine) {
  validate(noise);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> e(n);
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, iid_normal>) {
          for (double& v : e) v = m.s * normal(engine);
        } else if constexpr (std::is_same_v<T, iid_student_t>) {
          std::student_t_distribution<double> t(m.df);
          for (double& v : e) v = m.scale * t(engine);
        } else if constexpr (std::is_same_v<T, ar1>) {
          double state = 0.0;
          for (std::size_t i = 0; i < burn_in_steps; ++i) state = m.rho * state + m.s * normal(engine);
          for (double& v : e) v = state = m.rho * state + m.s * normal(engine);
        } else if constexpr (std::is_same_v<T, moving_average>) {
          const std::size_t q = m.coeffs.size();
          std::vector<double> eta(n + q);
          for (double& v : eta) v = normal(engine);
          for (std::size_t i = 0; i < n; ++i) {
            double v = eta[i + q];
            for (std::size_t j = 0; j < q; ++j) v += m.coeffs[j] * eta[i + q - j - 1];
            e[i] = m.s * v;
          }
        } else {
          double state = 0.0;
          for (std::size_t i = 0; i < burn_in_steps; ++i) state = m.a * std::tanh(state) + m.s * normal(engine);
          for (double& v : e) v = state = m.a * std::tanh(state) + m.s * normal(engine);
        }
      },
      noise);
  return e;
}

/// X_i = mu0 + e_i for i <= k_star and mu0 + delta + e_i afterwards.
template <class Engine>
time_series generate_series(const noise_model& noise, const change_spec& change, std::size_t n, Engine& engine) {
  detail::require(n >= 2, error_kind::invalid_parameter, "series length must be >= 2");
  if (change.k_star) {
    detail::require(*change.k_star >= 1 && *change.k_star < n, error_kind::invalid_model,
                    "change point must satisfy 1 <= k* < N");
  }
  detail::require(std::isfinite(change.delta) && std::isfinite(change.mu0), error_kind::invalid_model,
                  "change parameters must be finite");
  auto x = generate_noise(noise, n, engine);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] += change.mu0;
    if (change.k_star && i + 1 > *change.k_star) x[i] += change.delta;
  }
  return time_series{std::move(x)};
}

inline time_series generate_series(const noise_model& noise, const change_spec& change, std::size_t n,
                                   std::uint64_t seed) {
  auto engine = make_engine(seed, 0);
  return generate_series(noise, change, n, engine);
}

/// Analytic long-run variance, when one is known.
[[nodiscard]] inline std::optional<double> true_lrv(const noise_model& noise) {
  return std::visit(
      [](const auto& m) -> std::optional<double> {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, iid_normal>) {
          return m.s * m.s;
        } else if constexpr (std::is_same_v<T, iid_student_t>) {
          return m.scale * m.scale * m.df / (m.df - 2.0);
        } else if constexpr (std::is_same_v<T, ar1>) {
          return m.s * m.s / ((1.0 - m.rho) * (1.0 - m.rho));
        } else if constexpr (std::is_same_v<T, moving_average>) {
          double sum = 1.0;
          for (double c : m.coeffs) sum += c;
          return m.s * m.s * sum * sum;
        } else {
          return std::nullopt;
        }
      },
      noise);
}

}  // namespace cusum_lp
