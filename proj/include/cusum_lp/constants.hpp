#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "cusum_lp/error.hpp"
#include "cusum_lp/quadrature.hpp"

namespace cusum_lp {

/// b(p) = E|N|^p = 2^{p/2} Gamma((p+1)/2) / sqrt(pi).
[[nodiscard]] inline double compute_b(double p) {
  detail::require(std::isfinite(p) && p >= 0.0, error_kind::invalid_parameter, "p must be >= 0");
  return std::exp(0.5 * p * std::numbers::ln2 + std::lgamma(0.5 * (p + 1.0))) / std::sqrt(std::numbers::pi);
}

/// Value of the density g_u at (x, y), written exactly as in the a(p) integrand:
/// (2 pi s)^{-1} exp(-(x^2 + y^2 - 2 rho |xy|) / (2 s^2)), rho = e^{-|u|}, s^2 = 1 - rho^2.
/// Note the |xy|: g_u is not a probability density and its mass exceeds one.
[[nodiscard]] inline double g_density(double u, double x, double y) {
  const double rho = std::exp(-std::abs(u));
  const double s2 = -std::expm1(-2.0 * std::abs(u));
  return std::exp(-(x * x + y * y - 2.0 * rho * std::abs(x * y)) / (2.0 * s2)) /
         (2.0 * std::numbers::pi * std::sqrt(s2));
}

namespace detail {

inline constexpr double inner_rel_tol = 1e-12;
inline constexpr double outer_rel_tol = 1e-10;

/// Integral of |xy|^p g_u(x, y) over the positive quadrant, any p >= 0.
///
/// In polar coordinates the radial integral is a Gamma function, leaving
///   Gamma(p+1)/(4 pi s) * int_0^{pi/2} (cos(psi)/2)^p (2 s^2 / D(psi))^{p+1} dpsi
/// with D(psi) = (1 - rho) + 2 rho sin^2(psi/2). D is formed without
/// cancellation so the peak at psi = 0 stays resolved as u -> 0.
inline quadrature::result quadrant_moment(double p, double u) {
  u = std::abs(u);
  const double rho = std::exp(-u);
  const double one_minus_rho = -std::expm1(-u);
  const double s2 = one_minus_rho * (1.0 + rho);
  const double s = std::sqrt(s2);
  auto f = [&](double psi) {
    const double half = std::sin(0.5 * psi);
    const double d = one_minus_rho + 2.0 * rho * half * half;
    return std::pow(0.5 * std::cos(psi), p) * std::pow(2.0 * s2 / d, p + 1.0);
  };
  // the integrand has width ~ sqrt(1 - rho) around psi = 0
  const double width = std::sqrt(one_minus_rho);
  std::array<double, 4> cuts{0.0, std::min(width, 0.5), std::min(10.0 * width, 1.0), std::numbers::pi / 2.0};
  quadrature::result total{0.0, 0.0, 0, true};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[i]) continue;
    const auto r = quadrature::integrate(f, cuts[i], cuts[i + 1], 0.0, inner_rel_tol);
    total.value += r.value;
    total.error += r.error;
    total.intervals += r.intervals;
    total.converged = total.converged && r.converged;
  }
  const double scale = std::tgamma(p + 1.0) / (4.0 * std::numbers::pi * s);
  total.value *= scale;
  total.error *= scale;
  return total;
}

}  // namespace detail

/// c(u) = int int |xy|^p [g_u(x,y) - phi(x) phi(y)] dx dy.
///
/// |xy|^p is even in each coordinate, so reflecting the other quadrants onto
/// the positive one gives c(u) = 4 * quadrant_moment(p, u) - b(p)^2.
[[nodiscard]] inline double covariance_kernel(double p, double u) {
  const double b = compute_b(p);
  return 4.0 * detail::quadrant_moment(p, u).value - b * b;
}

/// Total mass of g_u over the plane (equals 1 + (2/pi) asin(e^{-|u|})).
[[nodiscard]] inline double g_mass(double u) { return 4.0 * detail::quadrant_moment(0.0, u).value; }

struct g_mass_point {
  double u = 0.0;
  double mass = 0.0;
};

struct constants_pair {
  double p = 0.0;
  double a_p = 0.0;
  double b_p = 0.0;
  double quadrature_error_estimate = 0.0;  ///< absolute, for a_p
  std::vector<g_mass_point> g_u_mass_check;
};

/// a(p) = 2 int_0^inf c(u) du, outer integral truncated at u = 40 with the
/// remaining tail (|c(u)| <= C e^{-u}) bounded by |c(40)| and added to the
/// error estimate. Throws accuracy_error when the relative error exceeds 1e-4.
[[nodiscard]] inline constants_pair compute_a(double p) {
  detail::require(std::isfinite(p) && p >= 1.0, error_kind::invalid_parameter, "p must be >= 1");
  constexpr double horizon = 40.0;
  const double b = compute_b(p);
  auto c = [&](double u) { return 4.0 * detail::quadrant_moment(p, u).value - b * b; };

  constexpr std::array<double, 8> cuts{0.0, 0.01, 0.1, 1.0, 4.0, 10.0, 20.0, horizon};
  double value = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const auto r = quadrature::integrate(c, cuts[i], cuts[i + 1], 1e-14, detail::outer_rel_tol, 500);
    value += r.value;
    error += r.error;
  }
  error += std::abs(c(horizon));

  constants_pair out;
  out.p = p;
  out.a_p = 2.0 * value;
  out.b_p = b;
  out.quadrature_error_estimate = 2.0 * error;
  for (double u : {0.1, 1.0, 5.0}) out.g_u_mass_check.push_back({u, g_mass(u)});

  if (!(out.quadrature_error_estimate <= 1e-4 * std::abs(out.a_p))) {
    throw accuracy_error("a(p) quadrature did not reach relative accuracy 1e-4", out.a_p,
                         out.quadrature_error_estimate);
  }
  return out;
}

}  // namespace cusum_lp
