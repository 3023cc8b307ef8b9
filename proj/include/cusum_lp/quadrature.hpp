#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace cusum_lp::quadrature {

struct result {
  double value = 0.0;
  double error = 0.0;
  std::size_t intervals = 0;
  bool converged = false;
};

namespace detail {

// Kronrod 15-point abscissae and weights, with the embedded 7-point Gauss weights
// (the Gauss nodes are the odd-indexed Kronrod nodes).
inline constexpr std::array<double, 8> kronrod_x = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kronrod_w = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

inline constexpr std::array<double, 4> gauss_w = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct panel {
  double a, b, value, error;
  bool operator<(const panel& other) const { return error < other.error; }
};

template <class F>
panel kronrod15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kronrod_w[7];
  double gauss = fc * gauss_w[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kronrod_x[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kronrod_w[j] * sum;
    if (j % 2 == 1) gauss += gauss_w[j / 2] * sum;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) quadrature of f over [a, b].
///
/// Panels are bisected in order of decreasing error until the summed error falls
/// below max(abs_tol, rel_tol * |value|) or max_intervals is reached. The
/// integrand is never evaluated at the endpoints, so integrable endpoint
/// singularities are tolerated (slowly).
template <class F>
result integrate(F&& f, double a, double b, double abs_tol, double rel_tol = 0.0,
                 std::size_t max_intervals = 2000) {
  if (a == b) return {0.0, 0.0, 0, true};
  std::vector<detail::panel> panels{detail::kronrod15(f, a, b)};
  double value = panels.front().value;
  double error = panels.front().error;
  while (error > std::max(abs_tol, rel_tol * std::abs(value)) && panels.size() < max_intervals) {
    std::pop_heap(panels.begin(), panels.end());
    const detail::panel worst = panels.back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // interval exhausted at double resolution
      std::push_heap(panels.begin(), panels.end());
      break;
    }
    panels.back() = detail::kronrod15(f, worst.a, mid);
    std::push_heap(panels.begin(), panels.end());
    panels.push_back(detail::kronrod15(f, mid, worst.b));
    std::push_heap(panels.begin(), panels.end());
    value = 0.0;
    error = 0.0;
    for (const auto& p : panels) {
      value += p.value;
      error += p.error;
    }
  }
  const bool ok = error <= std::max(abs_tol, rel_tol * std::abs(value));
  return {value, error, panels.size(), ok};
}

}  // namespace cusum_lp::quadrature
