#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "vssd/errors.hpp"

namespace vssd {

enum class Direction { Charge, Discharge };

inline std::string to_string(Direction d) {
  return d == Direction::Charge ? "charge" : "discharge";
}

inline Direction direction_from_string(const std::string& s) {
  if (s == "charge") return Direction::Charge;
  if (s == "discharge") return Direction::Discharge;
  throw ConfigError("direction must be 'charge' or 'discharge', got '" + s + "'");
}

/// Physical constants and cell geometry. Immutable per simulation.
/// Defaults are the LFP/lithium-foil half cell this library models;
/// every value can be overridden through the config file.
struct ParameterSet {
  // geometry [m]
  double l_cat = 72e-6;
  double l_sep = 675e-6;
  std::array<double, 3> r_bin{1.44e-7, 2.70e-7, 5.42e-7};

  // physical constants
  double r_gas = 8.3145;  // J/(mol K)
  double faraday = 96485.0;  // A s/mol

  // electrolyte transport
  double t_plus0 = 0.363;
  double eps_e_sep = 0.6;
  double eps_e_cat = 0.5;
  double k_eff_sep = 0.6042;   // S/m
  double k_eff_cat = 0.4596;   // S/m
  double de_eff_sep = 4.028e-10;  // m^2/s
  double de_eff_cat = 3.677e-10;  // m^2/s

  // solid phase
  double sigma_eff = 6.75;     // S/m
  double d_solid = 4.21e-18;   // m^2/s
  double c_s_max = 22.860e3;   // mol/m^3
  double i0 = 3.25e-2;         // A/m^2
  std::array<double, 3> eps_s_bin{0.5 / 3.0, 0.5 / 3.0, 0.5 / 3.0};

  // operating point
  double temperature = 298.15;  // K
  double c_ini = 1000.0;        // mol/m^3, initial electrolyte concentration

  // lithium-foil kinetics
  double i_f = 10.0;    // A/m^2
  double beta_f = 0.5;

  // cell-level
  double area = 1.202e-4;   // m^2
  double capacity = 2.31e-3 * 3600.0;  // A s (2.31 mAh)

  double sep_end() const { return l_sep; }
  double cell_end() const { return l_sep + l_cat; }

  /// Specific interfacial area of bin k: 3 eps_s / R.
  double a_bin(int k) const { return 3.0 * eps_s_bin[k] / r_bin[k]; }

  /// Current density of a 1C (dis)charge [A/m^2].
  double i_1c() const { return capacity / (3600.0 * area); }

  /// 2RT/F, the Butler-Volmer voltage scale [V].
  double thermal_voltage2() const { return 2.0 * r_gas * temperature / faraday; }

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0) || !std::isfinite(v))
        throw ConfigError(std::string(name) + " must be strictly positive and finite");
    };
    positive(l_cat, "l_cat");
    positive(l_sep, "l_sep");
    positive(r_gas, "r_gas");
    positive(faraday, "faraday");
    positive(k_eff_sep, "k_eff_sep");
    positive(k_eff_cat, "k_eff_cat");
    positive(sigma_eff, "sigma_eff");
    positive(de_eff_sep, "de_eff_sep");
    positive(de_eff_cat, "de_eff_cat");
    positive(d_solid, "d_solid");
    positive(c_s_max, "c_s_max");
    positive(temperature, "temperature");
    positive(c_ini, "c_ini");
    positive(i_f, "i_f");
    positive(area, "area");
    positive(capacity, "capacity");
    if (!(i0 >= 0.0)) throw ConfigError("i0 must be nonnegative");
    if (!(t_plus0 > 0.0 && t_plus0 < 1.0)) throw ConfigError("t_plus0 must lie in (0,1)");
    if (!(beta_f > 0.0 && beta_f < 1.0)) throw ConfigError("beta_f must lie in (0,1)");
    if (!(eps_e_sep > 0.0 && eps_e_sep < 1.0)) throw ConfigError("eps_e_sep must lie in (0,1)");
    if (!(eps_e_cat > 0.0 && eps_e_cat < 1.0)) throw ConfigError("eps_e_cat must lie in (0,1)");
    double eps_s_total = 0.0;
    for (int k = 0; k < 3; ++k) {
      positive(r_bin[k], "r_bin");
      positive(eps_s_bin[k], "eps_s_bin");
      eps_s_total += eps_s_bin[k];
      if (!std::isfinite(a_bin(k)) || a_bin(k) <= 0.0)
        throw ConfigError("derived interfacial area a_k is not positive/finite");
    }
    if (eps_s_total > 1.0 + 1e-12)
      throw ConfigError("sum of eps_s_bin exceeds 1");
  }
};

/// Gains of the current-derivative observer plus the saturation and
/// mollifier shape parameters.
struct SaturationParams {
  double g = 1.0;
  double h0 = 2.0;
  double h1 = 3.0;
  double a0 = 1.0;
  double b0 = 2.0251;
  double eps0 = 1e-4;

  void validate() const {
    for (double v : {g, h0, h1, a0, b0, eps0})
      if (!(v > 0.0) || !std::isfinite(v))
        throw ConfigError("saturation/observer parameters must be strictly positive");
  }
};

/// Rate-dependent correction coefficients for the activity factor.
/// omega0..omega2 apply to the discharge form, omega3/omega4 to the charge
/// form. Lookup is by C-rate with optional nearest-rate fallback.
struct RateCorrections {
  struct Row {
    double rate;  // C-rate
    double omega0, omega1, omega2;  // discharge
    double omega3, omega4;          // charge
  };
  std::vector<Row> rows;

  static RateCorrections defaults() {
    RateCorrections t;
    t.rows = {
        {2.0, 1.1, 1.2, 1.0, 1.5, 1.95},
        {1.0, 0.9, 0.96, 0.8, 1.0, 1.3},
        {0.5, 1.0, 0.6, 0.5, 0.75, 0.75},
        {0.2, 1.2, 0.4, 0.3, 0.85, 0.35},
        {0.1, 1.3, 0.3, 0.3, 1.0, 0.4},
    };
    return t;
  }

  void validate() const {
    if (rows.empty()) throw ConfigError("rate correction table is empty");
    for (const auto& r : rows)
      for (double v : {r.rate, r.omega0, r.omega1, r.omega2, r.omega3, r.omega4})
        if (!(v > 0.0) || !std::isfinite(v))
          throw ConfigError("rate correction coefficients must be strictly positive");
  }

  /// Nearest-rate lookup. Exact matches (1e-9 tolerance) always resolve;
  /// otherwise the closest tabulated rate is used when fallback is allowed.
  const Row& lookup(double rate, bool allow_fallback = true) const {
    if (rows.empty()) throw ConfigError("rate correction table is empty");
    const Row* best = nullptr;
    double best_dist = 0.0;
    for (const auto& r : rows) {
      double d = std::abs(r.rate - rate);
      if (!best || d < best_dist - 1e-15 ||
          (std::abs(d - best_dist) <= 1e-15 && r.rate < best->rate)) {
        best = &r;
        best_dist = d;
      }
    }
    if (best_dist > 1e-9 && !allow_fallback)
      throw ConfigError("C-rate " + std::to_string(rate) +
                        " is not tabulated and rate fallback is disabled");
    return *best;
  }
};

}  // namespace vssd
