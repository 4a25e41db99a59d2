#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <vector>

#include "vssd/errors.hpp"
#include "vssd/gauss.hpp"
#include "vssd/params.hpp"

namespace vssd {

/// Linear interpolation stencil inside one element.
struct InterpStencil {
  int i0 = 0, i1 = 0;
  double w0 = 0.0, w1 = 0.0;
};

/// 1D mesh on [0, L] = separator + porous electrode, with N1 uniform
/// elements in the separator and N2 in the electrode, and the piecewise
/// transport coefficients attached per element.
class SpatialGrid {
 public:
  int n1 = 0, n2 = 0;
  double x_interface = 0.0;  // separator/electrode boundary
  double x_end = 0.0;
  std::vector<double> nodes;
  // per element
  std::vector<double> h, de_eff, k_eff, eps_e;
  std::vector<bool> in_reaction_zone_elem;
  // per node
  std::vector<double> node_k_eff;
  std::vector<bool> node_in_reaction_zone;

  static SpatialGrid build(int n1, int n2, const ParameterSet& p) {
    if (n1 < 1 || n2 < 1) throw ConfigError("grid needs N1, N2 >= 1");
    SpatialGrid g;
    g.n1 = n1;
    g.n2 = n2;
    g.x_interface = p.sep_end();
    g.x_end = p.cell_end();
    g.nodes.resize(n1 + n2 + 1);
    double h_sep = p.l_sep / n1, h_cat = p.l_cat / n2;
    for (int i = 0; i <= n1; ++i) g.nodes[i] = i * h_sep;
    g.nodes[n1] = g.x_interface;  // exact
    for (int i = 1; i <= n2; ++i) g.nodes[n1 + i] = g.x_interface + i * h_cat;
    g.nodes[n1 + n2] = g.x_end;
    const int ne = n1 + n2;
    g.h.resize(ne);
    g.de_eff.resize(ne);
    g.k_eff.resize(ne);
    g.eps_e.resize(ne);
    g.in_reaction_zone_elem.resize(ne);
    for (int e = 0; e < ne; ++e) {
      bool cat = e >= n1;
      g.h[e] = g.nodes[e + 1] - g.nodes[e];
      g.de_eff[e] = cat ? p.de_eff_cat : p.de_eff_sep;
      g.k_eff[e] = cat ? p.k_eff_cat : p.k_eff_sep;
      g.eps_e[e] = cat ? p.eps_e_cat : p.eps_e_sep;
      g.in_reaction_zone_elem[e] = cat;
    }
    g.node_k_eff.resize(ne + 1);
    g.node_in_reaction_zone.resize(ne + 1);
    for (int i = 0; i <= ne; ++i) {
      g.node_k_eff[i] = i <= n1 ? p.k_eff_sep : p.k_eff_cat;
      g.node_in_reaction_zone[i] = i >= n1;
    }
    return g;
  }

  int n_nodes() const { return static_cast<int>(nodes.size()); }
  int n_elements() const { return n_nodes() - 1; }
  /// Electrode sub-grid (shared nodes N1..N1+N2).
  int n_cathode_nodes() const { return n2 + 1; }
  int cathode_node(int j) const { return n1 + j; }

  int locate(double x) const {
    int e = static_cast<int>(std::upper_bound(nodes.begin(), nodes.end(), x) -
                             nodes.begin()) - 1;
    return std::clamp(e, 0, n_elements() - 1);
  }

  InterpStencil stencil(double x) const {
    int e = locate(x);
    InterpStencil s;
    s.i0 = e;
    s.i1 = e + 1;
    s.w1 = (x - nodes[e]) / h[e];
    s.w0 = 1.0 - s.w1;
    return s;
  }

  double eval(const Eigen::VectorXd& coeffs, double x) const {
    auto s = stencil(x);
    return s.w0 * coeffs[s.i0] + s.w1 * coeffs[s.i1];
  }

  double eval_deriv(const Eigen::VectorXd& coeffs, double x) const {
    int e = locate(x);
    return (coeffs[e + 1] - coeffs[e]) / h[e];
  }

  /// Cumulative ionic resistance: integral of 1/k_eff over [0, v].
  double kinv_cumulative(double v) const {
    double acc = 0.0;
    for (int e = 0; e < n_elements() && v > nodes[e]; ++e)
      acc += (std::min(v, nodes[e + 1]) - nodes[e]) / k_eff[e];
    return acc;
  }
};

/// One reaction-zone quadrature point with its interpolation stencils on
/// the full grid and on the electrode sub-grid.
struct ReactionQPoint {
  double x = 0.0, w = 0.0;
  InterpStencil global;    // into full-grid fields (phi1, c1)
  InterpStencil cathode;   // into electrode-node fields (phi2, surface conc.)
};

/// Assembled Galerkin matrices and precomputed integral kernels.
///
/// The electrolyte balance uses the porosity-weighted (conservative) forms
/// so that the eps-weighted lithium content is an exact invariant of the
/// discrete reaction/injection pair.
struct GalerkinStructures {
  Eigen::MatrixXd mass;        // plain spline mass, sum = L
  Eigen::MatrixXd mass_eps;    // eps_e-weighted mass
  Eigen::MatrixXd stiff_epsde; // eps_e * De_eff weighted stiffness
  Eigen::MatrixXd stiff_unit;  // unweighted stiffness
  Eigen::LDLT<Eigen::MatrixXd> mass_eps_ldlt;

  /// Mollified boundary functional: weights of integral of delta(x) N_m dx.
  /// Doubles as the injection shape (unit mass) and as the mollified
  /// evaluation of c1 near x = 0.
  Eigen::VectorXd boundary_moll;

  std::vector<ReactionQPoint> rq;  // reaction-zone quadrature
  Eigen::MatrixXd a1;  // (n_nodes x nq) kernel for the phi1 double integral
  Eigen::MatrixXd a2;  // (n_cat x nq) kernel for the phi2 double integral

  static GalerkinStructures build(const SpatialGrid& g, const ParameterSet& p,
                                  const SaturationParams& sp,
                                  int quad_per_element = 4) {
    GalerkinStructures s;
    const int n = g.n_nodes();
    s.mass = Eigen::MatrixXd::Zero(n, n);
    s.mass_eps = Eigen::MatrixXd::Zero(n, n);
    s.stiff_epsde = Eigen::MatrixXd::Zero(n, n);
    s.stiff_unit = Eigen::MatrixXd::Zero(n, n);
    for (int e = 0; e < g.n_elements(); ++e) {
      double h = g.h[e];
      double m00 = h / 3.0, m01 = h / 6.0;
      double k = 1.0 / h;
      double eps = g.eps_e[e], de = g.de_eff[e];
      int i = e, j = e + 1;
      s.mass(i, i) += m00; s.mass(j, j) += m00;
      s.mass(i, j) += m01; s.mass(j, i) += m01;
      s.mass_eps(i, i) += eps * m00; s.mass_eps(j, j) += eps * m00;
      s.mass_eps(i, j) += eps * m01; s.mass_eps(j, i) += eps * m01;
      for (auto [a, b, sign] : {std::tuple{i, i, 1.0}, {j, j, 1.0},
                                {i, j, -1.0}, {j, i, -1.0}}) {
        s.stiff_unit(a, b) += sign * k;
        s.stiff_epsde(a, b) += sign * eps * de * k;
      }
    }
    s.mass_eps_ldlt.compute(s.mass_eps);

    // boundary mollifier against the spline basis
    s.boundary_moll = Eigen::VectorXd::Zero(n);
    double width = sp.eps0 * g.x_end;
    double height = 1.0 / width;
    for (int e = 0; e < g.n_elements() && g.nodes[e] < width; ++e) {
      double xa = g.nodes[e], xb = std::min(g.nodes[e + 1], width);
      double len = xb - xa;
      if (len <= 0.0) continue;
      double xm = 0.5 * (xa + xb);
      double w1 = (xm - g.nodes[e]) / g.h[e];  // N_{e+1} mean on [xa, xb]
      s.boundary_moll[e] += height * len * (1.0 - w1);
      s.boundary_moll[e + 1] += height * len * w1;
    }

    // reaction-zone quadrature and double-integral kernels
    for (int e = g.n1; e < g.n_elements(); ++e) {
      auto rule = gauss_legendre(quad_per_element, g.nodes[e], g.nodes[e + 1]);
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        ReactionQPoint pt;
        pt.x = rule.nodes[q];
        pt.w = rule.weights[q];
        pt.global = g.stencil(pt.x);
        InterpStencil c;
        c.i0 = pt.global.i0 - g.n1;
        c.i1 = pt.global.i1 - g.n1;
        c.w0 = pt.global.w0;
        c.w1 = pt.global.w1;
        pt.cathode = c;
        s.rq.push_back(pt);
      }
    }
    const int nq = static_cast<int>(s.rq.size());
    s.a1.resize(n, nq);
    s.a2.resize(g.n_cathode_nodes(), nq);
    for (int q = 0; q < nq; ++q) {
      double xq = s.rq[q].x, wq = s.rq[q].w;
      for (int i = 0; i < n; ++i)
        s.a1(i, q) = wq * g.kinv_cumulative(std::min(g.nodes[i], xq));
      for (int j = 0; j < g.n_cathode_nodes(); ++j) {
        double xi = g.nodes[g.cathode_node(j)];
        s.a2(j, q) = wq * std::max(0.0, xi - xq);
      }
    }
    return s;
  }
};

}  // namespace vssd
