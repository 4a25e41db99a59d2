#pragma once

#include <cmath>
#include <vector>

namespace vssd {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  template <typename F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t q = 0; q < nodes.size(); ++q) s += weights[q] * f(nodes[q]);
    return s;
  }
};

/// n-point Gauss-Legendre rule on [a, b]. Nodes by Newton iteration on the
/// Legendre recurrence (symmetric, so only half are computed).
inline QuadratureRule gauss_legendre(int n, double a, double b) {
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double xm = 0.5 * (b + a), xl = 0.5 * (b - a);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    rule.nodes[i] = xm - xl * z;
    rule.nodes[n - 1 - i] = xm + xl * z;
    rule.weights[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  return rule;
}

}  // namespace vssd
