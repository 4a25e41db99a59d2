#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

#include "vssd/errors.hpp"
#include "vssd/gauss.hpp"

namespace vssd {

namespace detail {

/// sin(x)/x with the removable singularity handled by series.
inline double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    double x2 = x * x;
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
  }
  return std::sin(x) / x;
}

/// d/dx sinc(x) = (cos x - sinc x)/x.
inline double dsinc(double x) {
  if (std::abs(x) < 1e-4) {
    double x2 = x * x;
    return -x / 3.0 * (1.0 - x2 / 10.0);
  }
  return (std::cos(x) - sinc(x)) / x;
}

}  // namespace detail

/// First n entries of {0, gamma_1, gamma_2, ...} where gamma_j solves
/// tan(gamma) = gamma in (j pi, j pi + pi/2). Bisection on
/// g(x) = sin x - x cos x (pole-free), then Newton polish on tan x - x so
/// the residual |tan(gamma) - gamma| reaches the last representable bit.
inline std::vector<double> eigenroots(int n) {
  if (n < 1) throw ConfigError("eigenroots: need at least one mode");
  std::vector<double> gamma(n, 0.0);
  for (int j = 1; j < n; ++j) {
    double lo = j * M_PI, hi = j * M_PI + M_PI / 2.0;
    auto g = [](double x) { return std::sin(x) - x * std::cos(x); };
    double glo = g(lo);
    for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
      double mid = 0.5 * (lo + hi);
      double gm = g(mid);
      if ((glo <= 0.0) == (gm <= 0.0)) {
        lo = mid;
        glo = gm;
      } else {
        hi = mid;
      }
    }
    double x = 0.5 * (lo + hi);
    double best = x, best_res = std::abs(std::tan(x) - x);
    for (int it = 0; it < 8; ++it) {
      double t = std::tan(x);
      double step = (t - x) / (t * t);  // f' = tan^2 at the root
      x -= step;
      double res = std::abs(std::tan(x) - x);
      if (res < best_res) {
        best = x;
        best_res = res;
      }
    }
    gamma[j] = best;
  }
  return gamma;
}

/// Radial eigenfunction basis for one particle bin: v_0 = 1 and
/// v_j(r) = sin(gamma_j r / R)/r, with Neumann endpoints. Carries the
/// weighted norms, a Gauss rule on [0,R], and tabulated basis values.
class RadialBasis {
 public:
  int n_modes = 0;
  double radius = 0.0;
  std::vector<double> gamma;  // gamma[0] = 0
  std::vector<double> norm;   // integral of r^2 v_j^2 over [0,R]
  QuadratureRule quad;

  static RadialBasis build(int n_modes, double radius, int quad_points = 0) {
    if (n_modes < 1) throw ConfigError("radial basis needs n_modes >= 1");
    if (!(radius > 0.0)) throw ConfigError("radial basis needs a positive radius");
    RadialBasis b;
    b.n_modes = n_modes;
    b.radius = radius;
    b.gamma = eigenroots(n_modes);
    if (quad_points <= 0) quad_points = 4 * n_modes;
    b.quad = gauss_legendre(quad_points, 0.0, radius);
    b.norm.resize(n_modes);
    b.norm[0] = radius * radius * radius / 3.0;
    for (int j = 1; j < n_modes; ++j) {
      double g = b.gamma[j];
      b.norm[j] = 0.5 * radius * (1.0 - std::sin(2.0 * g) / (2.0 * g));
    }
    b.tabulate();
    return b;
  }

  /// v_j(r); the j >= 1 modes have the sinc form with v_j(0) = gamma_j/R.
  double eval(int j, double r) const {
    if (j == 0) return 1.0;
    double gt = gamma[j] / radius;
    return gt * detail::sinc(gt * r);
  }

  /// d/dr v_j(r).
  double eval_deriv(int j, double r) const {
    if (j == 0) return 0.0;
    double gt = gamma[j] / radius;
    return gt * gt * detail::dsinc(gt * r);
  }

  /// W_j(r) = integral of s^2 v_j(s) over [0, r] (closed form).
  double eval_primitive(int j, double r) const {
    if (j == 0) return r * r * r / 3.0;
    double gt = gamma[j] / radius;
    double x = gt * r;
    // (sin x - x cos x)/gt^2; series for small x to avoid cancellation
    if (std::abs(x) < 1e-4) {
      double x3 = x * x * x;
      return (x3 / 3.0 * (1.0 - x * x / 10.0)) / (gt * gt);
    }
    return (std::sin(x) - x * std::cos(x)) / (gt * gt);
  }

  double surface_value(int j) const { return v_surf_[j]; }

  /// Surface concentration for a coefficient vector.
  double surface(const Eigen::VectorXd& coeffs) const {
    double s = 0.0;
    for (int j = 0; j < n_modes; ++j) s += coeffs[j] * v_surf_[j];
    return s;
  }

  /// Volume-mean concentration; modes j >= 1 integrate to zero against r^2
  /// at the eigenroots, so the mean is the constant-mode coefficient.
  double mean(const Eigen::VectorXd& coeffs) const { return coeffs[0]; }

  /// c(r_q) at every quadrature point.
  void values_at_quad(const Eigen::VectorXd& coeffs, Eigen::VectorXd& out) const {
    out.noalias() = vtab_ * coeffs;
  }

  /// dc/dr(r_q) at every quadrature point.
  void derivs_at_quad(const Eigen::VectorXd& coeffs, Eigen::VectorXd& out) const {
    out.noalias() = dvtab_ * coeffs;
  }

  /// Galerkin action of the variable-coefficient radial stiffness:
  /// out_j = (1/norm_j) * integral of r^2 alpha(r) D v_j' c' dr,
  /// with alpha given at the quadrature points.
  Eigen::VectorXd nonlinear_apply_values(const Eigen::VectorXd& cprime_at_quad,
                                         const Eigen::VectorXd& alpha_at_quad,
                                         double diffusivity) const {
    const int nq = static_cast<int>(quad.nodes.size());
    Eigen::VectorXd integrand(nq);
    for (int q = 0; q < nq; ++q) {
      double r = quad.nodes[q];
      integrand[q] = quad.weights[q] * r * r * alpha_at_quad[q] * cprime_at_quad[q];
      if (!std::isfinite(integrand[q]))
        throw NumericError("radial stiffness quadrature produced a non-finite value");
    }
    Eigen::VectorXd out = dvtab_.transpose() * integrand;
    for (int j = 0; j < n_modes; ++j) out[j] *= diffusivity / norm[j];
    return out;
  }

  /// Convenience overload taking alpha as a function of radius.
  Eigen::VectorXd nonlinear_apply(const Eigen::VectorXd& coeffs,
                                  const std::function<double(double)>& alpha_of_r,
                                  double diffusivity) const {
    const int nq = static_cast<int>(quad.nodes.size());
    Eigen::VectorXd cprime(nq), alpha(nq);
    derivs_at_quad(coeffs, cprime);
    for (int q = 0; q < nq; ++q) alpha[q] = alpha_of_r(quad.nodes[q]);
    return nonlinear_apply_values(cprime, alpha, diffusivity);
  }

  /// Projection of r -> integral_0^r alpha c' ds onto the basis, evaluated
  /// through integration by parts so only single quadratures appear:
  ///   (1/norm_j) [ W_j(R) Phi(R) - integral of W_j alpha c' dr ].
  Eigen::VectorXd project_path_integral(const Eigen::VectorXd& cprime_at_quad,
                                        const Eigen::VectorXd& alpha_at_quad) const {
    const int nq = static_cast<int>(quad.nodes.size());
    Eigen::VectorXd f(nq);
    double phi_R = 0.0;
    for (int q = 0; q < nq; ++q) {
      f[q] = quad.weights[q] * alpha_at_quad[q] * cprime_at_quad[q];
      phi_R += f[q];
    }
    Eigen::VectorXd out = -wtab_.transpose() * f;
    for (int j = 0; j < n_modes; ++j)
      out[j] = (out[j] + w_surf_[j] * phi_R) / norm[j];
    return out;
  }

  const Eigen::MatrixXd& value_table() const { return vtab_; }
  const Eigen::MatrixXd& deriv_table() const { return dvtab_; }

 private:
  void tabulate() {
    const int nq = static_cast<int>(quad.nodes.size());
    vtab_.resize(nq, n_modes);
    dvtab_.resize(nq, n_modes);
    wtab_.resize(nq, n_modes);
    for (int q = 0; q < nq; ++q)
      for (int j = 0; j < n_modes; ++j) {
        vtab_(q, j) = eval(j, quad.nodes[q]);
        dvtab_(q, j) = eval_deriv(j, quad.nodes[q]);
        wtab_(q, j) = eval_primitive(j, quad.nodes[q]);
      }
    v_surf_.resize(n_modes);
    w_surf_.resize(n_modes);
    for (int j = 0; j < n_modes; ++j) {
      v_surf_[j] = eval(j, radius);
      w_surf_[j] = eval_primitive(j, radius);
    }
  }

  Eigen::MatrixXd vtab_, dvtab_, wtab_;  // quad point x mode
  std::vector<double> v_surf_, w_surf_;
};

}  // namespace vssd
