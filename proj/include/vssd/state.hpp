#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>

#include "vssd/functions.hpp"
#include "vssd/params.hpp"
#include "vssd/radial.hpp"
#include "vssd/spatial.hpp"

namespace vssd {

/// Everything fixed by (params, gains, N1, N2, N3): the spatial grid, the
/// assembled Galerkin structures, and one radial basis per particle bin.
/// Immutable after construction; safe to share across threads.
struct Discretization {
  SpatialGrid grid;
  GalerkinStructures gal;
  std::array<RadialBasis, 3> radial;
  int n3 = 0;

  static Discretization build(const ParameterSet& p, const SaturationParams& sp,
                              int n1, int n2, int n3) {
    if (n3 < 1) throw ConfigError("grid needs N3 >= 1");
    Discretization d;
    d.n3 = n3;
    d.grid = SpatialGrid::build(n1, n2, p);
    d.gal = GalerkinStructures::build(d.grid, p, sp);
    for (int k = 0; k < 3; ++k) d.radial[k] = RadialBasis::build(n3, p.r_bin[k]);
    return d;
  }
};

/// Electrolyte and solid potentials. phi1 lives on the full grid with
/// phi1(0) = 0 (grounding) kept explicit; phi2 lives on the electrode
/// sub-grid; the anchor is the scalar phi2(L1) unknown of the constraint
/// system.
struct PotentialField {
  Eigen::VectorXd phi1;  // size n_nodes, phi1[0] == 0
  Eigen::VectorXd phi2;  // size n_cathode_nodes
  double anchor = 0.0;

  static PotentialField zero(const Discretization& d) {
    PotentialField f;
    f.phi1 = Eigen::VectorXd::Zero(d.grid.n_nodes());
    f.phi2 = Eigen::VectorXd::Zero(d.grid.n_cathode_nodes());
    f.anchor = 0.0;
    return f;
  }
};

/// Reduced state: spline coefficients for the electrolyte concentration
/// plus radial eigenmode coefficients per bin and electrode node, and the
/// dynamically carried potentials.
struct CellState {
  Eigen::VectorXd c1;                   // mol/m^3 at grid nodes
  std::array<Eigen::MatrixXd, 3> cs;    // (cathode node) x (mode)
  PotentialField phi;

  static CellState uniform(const Discretization& d, const ParameterSet& p,
                           double soc0) {
    CellState s;
    s.c1 = Eigen::VectorXd::Constant(d.grid.n_nodes(), p.c_ini);
    for (int k = 0; k < 3; ++k) {
      s.cs[k] = Eigen::MatrixXd::Zero(d.grid.n_cathode_nodes(), d.n3);
      s.cs[k].col(0).setConstant(soc0 * p.c_s_max);
    }
    s.phi = PotentialField::zero(d);
    return s;
  }

  /// Electrolyte concentration at x = 0 (the foil boundary).
  double c1_at_0() const { return c1[0]; }

  /// Surface concentration of bin k at cathode node i.
  double surface_conc(const Discretization& d, int k, int i) const {
    double v = 0.0;
    for (int j = 0; j < d.n3; ++j)
      v += cs[k](i, j) * d.radial[k].surface_value(j);
    return v;
  }

  bool all_finite() const {
    if (!c1.allFinite()) return false;
    for (const auto& m : cs)
      if (!m.allFinite()) return false;
    return phi.phi1.allFinite() && phi.phi2.allFinite() && std::isfinite(phi.anchor);
  }
};

/// Time derivative of the concentration part of the state.
struct StateRate {
  Eigen::VectorXd c1;
  std::array<Eigen::MatrixXd, 3> cs;

  static StateRate zero_like(const CellState& s) {
    StateRate r;
    r.c1 = Eigen::VectorXd::Zero(s.c1.size());
    for (int k = 0; k < 3; ++k)
      r.cs[k] = Eigen::MatrixXd::Zero(s.cs[k].rows(), s.cs[k].cols());
    return r;
  }
};

/// Rate of the potential fields (three blocks advanced together).
struct PotentialRate {
  Eigen::VectorXd phi1;
  Eigen::VectorXd phi2;
  double anchor = 0.0;
};

inline void add_scaled(CellState& s, double a, const StateRate& r) {
  s.c1 += a * r.c1;
  for (int k = 0; k < 3; ++k) s.cs[k] += a * r.cs[k];
}

inline void add_scaled(PotentialField& f, double a, const PotentialRate& r) {
  f.phi1 += a * r.phi1;
  f.phi2 += a * r.phi2;
  f.anchor += a * r.anchor;
}

}  // namespace vssd
