#pragma once

#include <algorithm>
#include <cmath>

#include "vssd/errors.hpp"
#include "vssd/params.hpp"

namespace vssd {

/// Odd sigmoid saturation, range (-b0, b0).
inline double sat(double s, const SaturationParams& sp) {
  return 2.0 * sp.b0 / (1.0 + std::exp(-sp.a0 * s)) - sp.b0;
}

/// d/ds of sat(s) = a0 (b0^2 - sat^2) / (2 b0).
inline double sat_deriv(double s, const SaturationParams& sp) {
  double v = sat(s, sp);
  return sp.a0 * (sp.b0 * sp.b0 - v * v) / (2.0 * sp.b0);
}

/// Logistic squashing of stoichiometry, range (0, 1).
inline double sat_y(double s, double a0) {
  return 1.0 / (1.0 + std::exp(-a0 * s));
}

inline double sat_y_deriv(double s, double a0) {
  double y = sat_y(s, a0);
  return a0 * y * (1.0 - y);
}

/// Rectangular mollifier of unit mass supported on [x0 (1-eps0), x0].
inline double mollifier(double x, double x0, double eps0) {
  if (!(eps0 > 0.0)) throw ConfigError("mollifier width eps0 must be positive");
  if (!(x0 > 0.0)) throw ConfigError("mollifier center x0 must be positive");
  double lo = x0 - eps0 * x0;
  return (x >= lo && x <= x0) ? 1.0 / (eps0 * x0) : 0.0;
}

/// Boundary variant supported on [0, eps0 L].
inline double mollifier_boundary(double x, double length, double eps0) {
  if (!(eps0 > 0.0)) throw ConfigError("mollifier width eps0 must be positive");
  if (!(length > 0.0)) throw ConfigError("mollifier length must be positive");
  return (x >= 0.0 && x <= eps0 * length) ? 1.0 / (eps0 * length) : 0.0;
}

/// Open circuit potential of the LFP electrode [V]. The empirical fit
/// differs between the charging and discharging branch.
inline double ocp(double y, Direction dir) {
  if (!(y > 0.0 && y < 1.0))
    throw ConfigError("ocp stoichiometry must lie in (0,1)");
  if (dir == Direction::Charge)
    return 3.4510 - 0.009 * y + 0.6687 * std::exp(-35.0 * y) -
           0.5 * std::exp(-210.0 * (1.0 - y));
  return 3.4077 - 0.020269 * y + 0.5 * std::exp(-200.0 * y) -
         0.9 * std::exp(-30.0 * (1.0 - y));
}

inline double ocp_deriv(double y, Direction dir) {
  if (!(y > 0.0 && y < 1.0))
    throw ConfigError("ocp stoichiometry must lie in (0,1)");
  if (dir == Direction::Charge)
    return -0.009 - 35.0 * 0.6687 * std::exp(-35.0 * y) -
           210.0 * 0.5 * std::exp(-210.0 * (1.0 - y));
  return -0.020269 - 200.0 * 0.5 * std::exp(-200.0 * y) -
         30.0 * 0.9 * std::exp(-30.0 * (1.0 - y));
}

/// Activity correction factor modulating the solid diffusivity.
inline double activity_correction(double y) {
  if (!(y >= 0.0 && y <= 1.0))
    throw ConfigError("activity correction stoichiometry must lie in [0,1]");
  double d = y - 0.5;
  return 6.0 * std::exp(-25.0 * y) + 15.0 * std::exp(-35.0 * (1.0 - y)) +
         0.3 / (1.0 + d * d);
}

/// Rate-dependent activity correction factor; the omega coefficients are
/// looked up by (C-rate, direction).
inline double activity_correction_rated(double y, Direction dir, double rate,
                                        const RateCorrections& table,
                                        bool allow_fallback = true) {
  if (!(y >= 0.0 && y <= 1.0))
    throw ConfigError("activity correction stoichiometry must lie in [0,1]");
  const auto& row = table.lookup(rate, allow_fallback);
  double d = y - 0.5;
  double lorentz = 1.0 / (1.0 + d * d);
  if (dir == Direction::Discharge)
    return 9.0 * std::exp(-25.0 * y) +
           15.0 * row.omega0 * std::exp(-30.0 * (1.0 - y)) +
           3.0 * row.omega1 * std::exp(-15.0 * (1.0 - y)) +
           0.2 * row.omega2 * lorentz;
  return 9.0 * row.omega3 * std::exp(-25.0 * y) +
         15.0 * std::exp(-30.0 * (1.0 - y)) + 0.2 * row.omega4 * lorentz;
}

/// Saturated Butler-Volmer reaction rate [A/m^2]; zero outside the
/// reaction zone (the porous electrode).
inline double exchange_current(double eta_bar, const ParameterSet& p,
                               const SaturationParams& sp, bool in_reaction_zone) {
  if (!in_reaction_zone) return 0.0;
  double u = p.faraday * eta_bar / (2.0 * p.r_gas * p.temperature);
  return 2.0 * p.i0 * std::sinh(sat(u, sp));
}

/// d/d(eta_bar) of exchange_current.
inline double exchange_current_deriv(double eta_bar, const ParameterSet& p,
                                     const SaturationParams& sp,
                                     bool in_reaction_zone) {
  if (!in_reaction_zone) return 0.0;
  double scale = p.faraday / (2.0 * p.r_gas * p.temperature);
  double u = scale * eta_bar;
  return 2.0 * p.i0 * std::cosh(sat(u, sp)) * sat_deriv(u, sp) * scale;
}

/// How raw concentration ratios are mapped into the (0,1) stoichiometry
/// that feeds the OCP and activity correction.
enum class StoichMode {
  Saturated,  // logistic sat_y(c / c_max), the model's own definition
  RawClamp,   // c / c_max clamped just inside (0,1)
};

inline StoichMode stoich_mode_from_string(const std::string& s) {
  if (s == "saturated") return StoichMode::Saturated;
  if (s == "raw_clamp") return StoichMode::RawClamp;
  throw ConfigError("stoich_mode must be 'saturated' or 'raw_clamp', got '" + s + "'");
}

inline std::string to_string(StoichMode m) {
  return m == StoichMode::Saturated ? "saturated" : "raw_clamp";
}

inline double stoichiometry(double c, double c_max, double a0,
                            StoichMode mode = StoichMode::Saturated) {
  if (mode == StoichMode::Saturated) {
    // keep the value strictly inside (0,1) even where the logistic rounds
    // onto its asymptotes
    double y = sat_y(c / c_max, a0);
    return std::clamp(y, 1e-300, 0x1.fffffffffffffp-1);
  }
  constexpr double margin = 1e-6;
  return std::clamp(c / c_max, margin, 1.0 - margin);
}

/// d/dc of stoichiometry.
inline double stoichiometry_deriv(double c, double c_max, double a0,
                                  StoichMode mode = StoichMode::Saturated) {
  if (mode == StoichMode::Saturated) return sat_y_deriv(c / c_max, a0) / c_max;
  constexpr double margin = 1e-6;
  double r = c / c_max;
  return (r > margin && r < 1.0 - margin) ? 1.0 / c_max : 0.0;
}

/// Surface stoichiometry of a particle bin from its surface concentration.
inline double surface_stoichiometry(double c_surf, const ParameterSet& p,
                                    const SaturationParams& sp,
                                    StoichMode mode = StoichMode::Saturated) {
  return stoichiometry(c_surf, p.c_s_max, sp.a0, mode);
}

/// Solid potential of the lithium foil [V] solving the foil Butler-Volmer
/// relation for the applied current density. For beta_f = 1/2 the asinh
/// closed form is used; otherwise a guarded Newton/bisection root-find.
inline double foil_potential(double current, double c1_at_0, const ParameterSet& p) {
  if (!(c1_at_0 > 0.0))
    throw ConfigError("foil kinetics need a positive electrolyte concentration");
  double pref = p.i_f * std::pow(c1_at_0 / p.c_ini, 1.0 - p.beta_f);
  double vt = p.r_gas * p.temperature / p.faraday;
  if (std::abs(p.beta_f - 0.5) < 1e-14)
    return 2.0 * vt * std::asinh(current / (2.0 * pref));

  auto f = [&](double phi) {
    return pref * (std::exp((1.0 - p.beta_f) * phi / vt) -
                   std::exp(-p.beta_f * phi / vt)) - current;
  };
  // f is strictly increasing; expand a bracket around 0, then bisect with
  // Newton acceleration.
  double lo = -vt, hi = vt;
  for (int i = 0; i < 200 && f(lo) > 0.0; ++i) lo *= 2.0;
  for (int i = 0; i < 200 && f(hi) < 0.0; ++i) hi *= 2.0;
  if (!(f(lo) <= 0.0 && f(hi) >= 0.0))
    throw SolverError("foil potential bracket not found", std::abs(f(0.0)));
  double phi = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    double fv = f(phi);
    if (std::abs(fv) < 1e-12 * std::max(1.0, std::abs(current))) return phi;
    if (fv > 0.0) hi = phi; else lo = phi;
    double dfv = pref / vt *
                 ((1.0 - p.beta_f) * std::exp((1.0 - p.beta_f) * phi / vt) +
                  p.beta_f * std::exp(-p.beta_f * phi / vt));
    double next = phi - fv / dfv;
    phi = (next > lo && next < hi) ? next : 0.5 * (lo + hi);
  }
  double res = std::abs(f(phi));
  if (res > 1e-10 * std::max(1.0, std::abs(current)))
    throw SolverError("foil potential root-find did not converge", res);
  return phi;
}

}  // namespace vssd
