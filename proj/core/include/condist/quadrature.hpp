#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>

// Adaptive panel integration based on the 7-15 Gauss-Kronrod pair.
// Panels are bisected until the Kronrod error estimate meets the local
// share of the absolute tolerance.

namespace condist::quad {

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

// Kronrod abscissae on [0, 1] margin; even indices are also Gauss-7 nodes.
inline constexpr std::array<double, 8> kXgk = {
    0.000000000000000, 0.405845151377397, 0.741531185599394, 0.949107912342759,
    0.207784955007898, 0.586087235467691, 0.864864423359769, 0.991455371120813};
inline constexpr std::array<double, 8> kWgk = {
    0.209482141084728, 0.190350578064785, 0.140653259715525, 0.063092092629979,
    0.204432940075298, 0.169004726639267, 0.104790010322250, 0.022935322010529};
inline constexpr std::array<double, 4> kWg = {
    0.417959183673469, 0.381830050505119, 0.279705391489277, 0.129484966168870};

inline double error_estimate(double diff) {
  // Standard magnitude heuristic: when Gauss and Kronrod nearly agree the
  // true error is far below |G - K|.
  const double d = std::abs(diff);
  if (d == 0.0) return 0.0;
  const double scaled = std::pow(200.0 * d, 1.5);
  return scaled < d ? scaled : d;
}

}  // namespace detail

// One Gauss-Kronrod panel; returns {kronrod value, error estimate}.
template <class F>
std::pair<double, double> gk15(F&& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double f0 = f(c);
  double gauss = detail::kWg[0] * f0;
  double kron = detail::kWgk[0] * f0;
  for (int j = 1; j < 4; ++j) {
    const double dx = h * detail::kXgk[j];
    const double fsum = f(c - dx) + f(c + dx);
    gauss += detail::kWg[j] * fsum;
    kron += detail::kWgk[j] * fsum;
  }
  for (int j = 4; j < 8; ++j) {
    const double dx = h * detail::kXgk[j];
    kron += detail::kWgk[j] * (f(c - dx) + f(c + dx));
  }
  gauss *= h;
  kron *= h;
  return {kron, detail::error_estimate(kron - gauss)};
}

namespace detail {

template <class F>
double integrate_rec(F& f, double a, double b, double tol, int depth) {
  const auto [value, err] = gk15(f, a, b);
  if (err <= tol || b - a <= 1e-15 * (std::abs(a) + std::abs(b) + 1.0)) {
    return value;
  }
  if (depth <= 0) {
    throw QuadratureError("adaptive quadrature did not converge to the requested tolerance");
  }
  const double mid = 0.5 * (a + b);
  return integrate_rec(f, a, mid, 0.5 * tol, depth - 1) +
         integrate_rec(f, mid, b, 0.5 * tol, depth - 1);
}

}  // namespace detail

// \int_a^b f(u) du to absolute tolerance abs_tol.
template <class F>
double integrate(F&& f, double a, double b, double abs_tol = 1e-10, int max_depth = 48) {
  if (!(a <= b)) throw std::invalid_argument("integrate: need a <= b");
  if (a == b) return 0.0;
  return detail::integrate_rec(f, a, b, abs_tol, max_depth);
}

namespace detail {

template <std::size_t N, class F>
std::pair<std::array<double, N>, double> gk15_vec(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  std::array<double, N> gauss{};
  std::array<double, N> kron{};
  const std::array<double, N> f0 = f(c);
  for (std::size_t i = 0; i < N; ++i) {
    gauss[i] = kWg[0] * f0[i];
    kron[i] = kWgk[0] * f0[i];
  }
  for (int j = 1; j < 4; ++j) {
    const double dx = h * kXgk[j];
    const std::array<double, N> lo = f(c - dx);
    const std::array<double, N> hi = f(c + dx);
    for (std::size_t i = 0; i < N; ++i) {
      const double fsum = lo[i] + hi[i];
      gauss[i] += kWg[j] * fsum;
      kron[i] += kWgk[j] * fsum;
    }
  }
  for (int j = 4; j < 8; ++j) {
    const double dx = h * kXgk[j];
    const std::array<double, N> lo = f(c - dx);
    const std::array<double, N> hi = f(c + dx);
    for (std::size_t i = 0; i < N; ++i) kron[i] += kWgk[j] * (lo[i] + hi[i]);
  }
  double err = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    gauss[i] *= h;
    kron[i] *= h;
    err = std::max(err, error_estimate(kron[i] - gauss[i]));
  }
  return {kron, err};
}

template <std::size_t N, class F>
std::array<double, N> integrate_vec_rec(F& f, double a, double b, double tol, int depth) {
  auto [value, err] = gk15_vec<N>(f, a, b);
  if (err <= tol || b - a <= 1e-15 * (std::abs(a) + std::abs(b) + 1.0)) {
    return value;
  }
  if (depth <= 0) {
    throw QuadratureError("adaptive vector quadrature did not converge to the requested tolerance");
  }
  const double mid = 0.5 * (a + b);
  const std::array<double, N> lo = integrate_vec_rec<N>(f, a, mid, 0.5 * tol, depth - 1);
  const std::array<double, N> hi = integrate_vec_rec<N>(f, mid, b, 0.5 * tol, depth - 1);
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = lo[i] + hi[i];
  return out;
}

}  // namespace detail

// Componentwise \int_a^b f(u) du for f: R -> R^N with shared evaluation
// points; every component meets abs_tol.
template <std::size_t N, class F>
std::array<double, N> integrate_vec(F&& f, double a, double b, double abs_tol = 1e-10,
                                    int max_depth = 48) {
  if (!(a <= b)) throw std::invalid_argument("integrate_vec: need a <= b");
  if (a == b) return std::array<double, N>{};
  return detail::integrate_vec_rec<N>(f, a, b, abs_tol, max_depth);
}

// Nested 2-d integral \int_{ay}^{by} \int_{ax}^{bx} f(x, y) dx dy.
// The inner integral is resolved one decade tighter than the outer budget.
template <class F2>
double integrate2d(F2&& f, double ax, double bx, double ay, double by, double abs_tol = 1e-8,
                   int max_depth = 40) {
  const double inner_tol = 0.1 * abs_tol / std::max(1.0, by - ay);
  auto outer = [&](double y) {
    return integrate([&](double x) { return f(x, y); }, ax, bx, inner_tol, max_depth);
  };
  return integrate(outer, ay, by, abs_tol, max_depth);
}

}  // namespace condist::quad
