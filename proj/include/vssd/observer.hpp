#pragma once

#include <array>
#include <cmath>

#include "vssd/params.hpp"

namespace vssd {

/// High-gain observer state: estimate of the input current and of its time
/// derivative. For constant input it converges to (I, 0).
struct ObserverState {
  double x1 = 0.0;  // current estimate [A/m^2]
  double x2 = 0.0;  // current-derivative estimate [A/(m^2 s)]
};

namespace detail {

inline double sinhc(double x) {
  if (std::abs(x) < 1e-5) return 1.0 + x * x / 6.0;
  return std::sinh(x) / x;
}

inline double sinc_obs(double x) {
  if (std::abs(x) < 1e-5) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

struct Mat2 {
  double a, b, c, d;
  std::array<double, 2> mul(double v1, double v2) const {
    return {a * v1 + b * v2, c * v1 + d * v2};
  }
};

/// exp(M t) for the 2x2 observer system matrix, by Cayley-Hamilton.
inline Mat2 expm2(const Mat2& m, double t) {
  double mean = 0.5 * (m.a + m.d);
  double det = m.a * m.d - m.b * m.c;
  double disc = mean * mean - det;
  double ch, shc;  // cosh(s t), sinh(s t)/(s t) with s = sqrt(|disc|)
  if (disc > 0.0) {
    double s = std::sqrt(disc);
    ch = std::cosh(s * t);
    shc = sinhc(s * t);
  } else if (disc < 0.0) {
    double s = std::sqrt(-disc);
    ch = std::cos(s * t);
    shc = sinc_obs(s * t);
  } else {
    ch = 1.0;
    shc = 1.0;
  }
  double e = std::exp(mean * t);
  // E = e^{mean t} (cosh(st) Id + sinh(st)/s (M - mean Id))
  return {e * (ch + shc * t * (m.a - mean)), e * shc * t * m.b,
          e * shc * t * m.c, e * (ch + shc * t * (m.d - mean))};
}

}  // namespace detail

/// One exact update of the linear observer dx/dt = M x + L I over a step
/// during which I is constant:
///   x+ = E x + M^{-1} (E - Id) L I,  E = exp(M dt).
inline ObserverState observer_step(const ObserverState& obs, double current,
                                   double dt, const SaturationParams& sp) {
  if (!(dt > 0.0)) throw ConfigError("observer step needs dt > 0");
  const double g = sp.g, h0 = sp.h0, h1 = sp.h1;
  detail::Mat2 m{-g * h1, 1.0, -g * g * h0, 0.0};
  detail::Mat2 e = detail::expm2(m, dt);
  // L chosen so the equilibrium is (I, 0)
  const double l1 = g * h1, l2 = g * g * h0;
  // M^{-1} (E - Id) L
  double em1 = (e.a - 1.0) * l1 + e.b * l2;
  double em2 = e.c * l1 + (e.d - 1.0) * l2;
  double det = g * g * h0;
  double f1 = (0.0 * em1 - 1.0 * em2) / det;
  double f2 = (det * em1 - g * h1 * em2) / det;
  auto ex = e.mul(obs.x1, obs.x2);
  return {ex[0] + f1 * current, ex[1] + f2 * current};
}

}  // namespace vssd
