#pragma once

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "vssd/dynamics.hpp"
#include "vssd/errors.hpp"
#include "vssd/options.hpp"
#include "vssd/profile.hpp"

namespace vssd {

namespace detail {

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  auto e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse '" + v +
                      "' as a number");
  }
}

inline int parse_int(const std::string& key, const std::string& v) {
  double d = parse_double(key, v);
  int i = static_cast<int>(std::lround(d));
  if (std::abs(d - i) > 1e-12)
    throw ConfigError("config key '" + key + "': expected an integer, got '" + v + "'");
  return i;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw ConfigError("config key '" + key + "': expected on/off, got '" + v + "'");
}

}  // namespace detail

/// Full run description: cell parameters, discretization orders, integrator
/// settings, the current profile, and stop conditions. Loaded from a plain
/// key = value text file; unknown keys are errors.
struct SimulationConfig {
  ParameterSet params;
  SaturationParams sats;

  int n1 = 4, n2 = 4, n3 = 6;

  std::string integrator = "rk4";  // rk4 | rk23
  double dt = 0.5;
  double correction_period = 3.0;
  double rtol = 1e-6;
  double atol_conc = 1e-2;
  double atol_pot = 1e-7;
  bool dae_mode = false;

  std::string profile = "constant";  // constant | schedule
  double rate_c = 1.0;
  std::string direction = "discharge";
  std::string schedule;  // "t0:I0; t1:I1; ..." [s : A/m^2]

  double t_end = -1.0;   // < 0 means auto
  double v_min = 2.0;
  double v_max = 4.2;
  double soc0 = -1.0;    // < 0 means auto (1 for discharge, 0 for charge)
  double sample_every = 0.0;

  bool rate_corrections = false;
  bool rate_fallback = true;
  std::string stoich_mode = "saturated";
  double lambda_shift = 0.0;

  std::string output = "trajectory.csv";

  void set(const std::string& key, const std::string& value) {
    using detail::parse_bool;
    using detail::parse_double;
    using detail::parse_int;
    const std::string& v = value;
    if (key == "l_cat") params.l_cat = parse_double(key, v);
    else if (key == "l_sep") params.l_sep = parse_double(key, v);
    else if (key == "r_bin1") params.r_bin[0] = parse_double(key, v);
    else if (key == "r_bin2") params.r_bin[1] = parse_double(key, v);
    else if (key == "r_bin3") params.r_bin[2] = parse_double(key, v);
    else if (key == "r_gas") params.r_gas = parse_double(key, v);
    else if (key == "faraday") params.faraday = parse_double(key, v);
    else if (key == "t_plus0") params.t_plus0 = parse_double(key, v);
    else if (key == "eps_e_sep") params.eps_e_sep = parse_double(key, v);
    else if (key == "eps_e_cat") params.eps_e_cat = parse_double(key, v);
    else if (key == "k_eff_sep") params.k_eff_sep = parse_double(key, v);
    else if (key == "k_eff_cat") params.k_eff_cat = parse_double(key, v);
    else if (key == "sigma_eff") params.sigma_eff = parse_double(key, v);
    else if (key == "de_eff_sep") params.de_eff_sep = parse_double(key, v);
    else if (key == "de_eff_cat") params.de_eff_cat = parse_double(key, v);
    else if (key == "d_solid") params.d_solid = parse_double(key, v);
    else if (key == "c_s_max") params.c_s_max = parse_double(key, v);
    else if (key == "i0") params.i0 = parse_double(key, v);
    else if (key == "eps_s_bin1") params.eps_s_bin[0] = parse_double(key, v);
    else if (key == "eps_s_bin2") params.eps_s_bin[1] = parse_double(key, v);
    else if (key == "eps_s_bin3") params.eps_s_bin[2] = parse_double(key, v);
    else if (key == "temperature") params.temperature = parse_double(key, v);
    else if (key == "c_ini") params.c_ini = parse_double(key, v);
    else if (key == "i_f") params.i_f = parse_double(key, v);
    else if (key == "beta_f") params.beta_f = parse_double(key, v);
    else if (key == "area") params.area = parse_double(key, v);
    else if (key == "capacity") params.capacity = parse_double(key, v);
    else if (key == "g") sats.g = parse_double(key, v);
    else if (key == "h0") sats.h0 = parse_double(key, v);
    else if (key == "h1") sats.h1 = parse_double(key, v);
    else if (key == "a0") sats.a0 = parse_double(key, v);
    else if (key == "b0") sats.b0 = parse_double(key, v);
    else if (key == "eps0") sats.eps0 = parse_double(key, v);
    else if (key == "n1") n1 = parse_int(key, v);
    else if (key == "n2") n2 = parse_int(key, v);
    else if (key == "n3") n3 = parse_int(key, v);
    else if (key == "integrator") integrator = v;
    else if (key == "dt") dt = parse_double(key, v);
    else if (key == "correction_period") correction_period = parse_double(key, v);
    else if (key == "rtol") rtol = parse_double(key, v);
    else if (key == "atol_conc") atol_conc = parse_double(key, v);
    else if (key == "atol_pot") atol_pot = parse_double(key, v);
    else if (key == "dae_mode") dae_mode = parse_bool(key, v);
    else if (key == "profile") profile = v;
    else if (key == "rate_c") rate_c = parse_double(key, v);
    else if (key == "direction") direction = v;
    else if (key == "schedule") schedule = v;
    else if (key == "t_end") t_end = v == "auto" ? -1.0 : parse_double(key, v);
    else if (key == "v_min") v_min = parse_double(key, v);
    else if (key == "v_max") v_max = parse_double(key, v);
    else if (key == "soc0") soc0 = v == "auto" ? -1.0 : parse_double(key, v);
    else if (key == "sample_every") sample_every = parse_double(key, v);
    else if (key == "rate_corrections") rate_corrections = parse_bool(key, v);
    else if (key == "rate_fallback") rate_fallback = parse_bool(key, v);
    else if (key == "stoich_mode") stoich_mode = v;
    else if (key == "lambda_shift") lambda_shift = parse_double(key, v);
    else if (key == "output") output = v;
    else throw ConfigError("unknown config key '" + key + "'");
  }

  static SimulationConfig load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    SimulationConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = detail::trim(line);
      if (line.empty()) continue;
      auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError(path + ":" + std::to_string(lineno) +
                          ": expected 'key = value'");
      cfg.set(detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
    }
    return cfg;
  }

  /// Applies a command-line "key=value" override.
  void apply_override(const std::string& kv) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw ConfigError("--set expects key=value, got '" + kv + "'");
    set(detail::trim(kv.substr(0, eq)), detail::trim(kv.substr(eq + 1)));
  }

  Direction parsed_direction() const { return direction_from_string(direction); }

  ModelOptions model_options() const {
    ModelOptions mo;
    mo.direction = parsed_direction();
    mo.stoich_mode = stoich_mode_from_string(stoich_mode);
    mo.rate_corrections = rate_corrections;
    mo.rate_fallback = rate_fallback;
    mo.lambda_shift = lambda_shift;
    return mo;
  }

  IntegratorConfig integrator_config() const {
    IntegratorConfig ic;
    if (integrator == "rk4") ic.method = IntegratorConfig::Method::RK4Fixed;
    else if (integrator == "rk23") ic.method = IntegratorConfig::Method::RK23Adaptive;
    else throw ConfigError("integrator must be 'rk4' or 'rk23'");
    ic.dt = dt;
    ic.correction_period = correction_period;
    ic.rtol = rtol;
    ic.atol_conc = atol_conc;
    ic.atol_pot = atol_pot;
    ic.dae_mode = dae_mode;
    ic.validate();
    return ic;
  }

  CurrentProfile current_profile() const {
    if (profile == "constant")
      return CurrentProfile::constant_rate(rate_c, parsed_direction(), params);
    if (profile != "schedule")
      throw ConfigError("profile must be 'constant' or 'schedule'");
    std::vector<std::pair<double, double>> pts;
    std::stringstream ss(schedule);
    std::string item;
    while (std::getline(ss, item, ';')) {
      item = detail::trim(item);
      if (item.empty()) continue;
      auto colon = item.find(':');
      if (colon == std::string::npos)
        throw ConfigError("schedule entries must be 't:I', got '" + item + "'");
      pts.emplace_back(detail::parse_double("schedule", detail::trim(item.substr(0, colon))),
                       detail::parse_double("schedule", detail::trim(item.substr(colon + 1))));
    }
    return CurrentProfile::schedule(std::move(pts), params);
  }

  RunConfig run_config() const {
    RunConfig rc;
    rc.v_min = v_min;
    rc.v_max = v_max;
    rc.sample_every = sample_every;
    rc.soc0 = soc0 >= 0.0 ? soc0
                          : (parsed_direction() == Direction::Discharge ? 1.0 : 0.0);
    if (t_end >= 0.0) {
      rc.t_end = t_end;
    } else if (profile == "constant") {
      rc.t_end = rate_c > 0.0 ? 3600.0 / rate_c : 1000.0;
    } else {
      double end = current_profile().end_time();
      if (!(end > 0.0))
        throw ConfigError("t_end = auto needs a schedule with more than one step");
      rc.t_end = end;
    }
    if (!(rc.t_end > 0.0)) throw ConfigError("t_end must be positive");
    if (!(rc.soc0 >= 0.0 && rc.soc0 <= 1.0))
      throw ConfigError("soc0 must lie in [0, 1]");
    if (!(rc.v_min < rc.v_max)) throw ConfigError("v_min must be below v_max");
    return rc;
  }

  void validate() const {
    params.validate();
    sats.validate();
    if (n1 < 1 || n2 < 1 || n3 < 1) throw ConfigError("N1, N2, N3 must be >= 1");
    integrator_config();
    current_profile();
    run_config();
    model_options();
  }

  /// Echo of the effective configuration, units documented, suitable for
  /// reloading as a config file.
  void print(std::ostream& os) const {
    auto line = [&os](const std::string& k, const auto& v, const char* unit) {
      os << k << " = " << v << "  # " << unit << "\n";
    };
    os << "# halfcell configuration (effective values)\n";
    os << "# --- cell geometry and transport ---\n";
    line("l_cat", params.l_cat, "m, porous electrode thickness");
    line("l_sep", params.l_sep, "m, separator thickness");
    line("r_bin1", params.r_bin[0], "m, particle radius bin 1");
    line("r_bin2", params.r_bin[1], "m, particle radius bin 2");
    line("r_bin3", params.r_bin[2], "m, particle radius bin 3");
    line("r_gas", params.r_gas, "J/(mol K)");
    line("faraday", params.faraday, "A s/mol");
    line("t_plus0", params.t_plus0, "-, transference number");
    line("eps_e_sep", params.eps_e_sep, "-, electrolyte volume fraction, separator");
    line("eps_e_cat", params.eps_e_cat, "-, electrolyte volume fraction, electrode");
    line("k_eff_sep", params.k_eff_sep, "S/m");
    line("k_eff_cat", params.k_eff_cat, "S/m");
    line("sigma_eff", params.sigma_eff, "S/m, solid-phase conductivity");
    line("de_eff_sep", params.de_eff_sep, "m^2/s");
    line("de_eff_cat", params.de_eff_cat, "m^2/s");
    line("d_solid", params.d_solid, "m^2/s, particle diffusivity");
    line("c_s_max", params.c_s_max, "mol/m^3");
    line("i0", params.i0, "A/m^2, exchange current density");
    line("eps_s_bin1", params.eps_s_bin[0], "-, solid volume fraction bin 1 (assumed default)");
    line("eps_s_bin2", params.eps_s_bin[1], "-, solid volume fraction bin 2 (assumed default)");
    line("eps_s_bin3", params.eps_s_bin[2], "-, solid volume fraction bin 3 (assumed default)");
    line("temperature", params.temperature, "K (assumed default)");
    line("c_ini", params.c_ini, "mol/m^3, initial electrolyte concentration (assumed default)");
    line("i_f", params.i_f, "A/m^2, foil exchange current density (assumed default)");
    line("beta_f", params.beta_f, "-, foil symmetry factor (assumed default)");
    line("area", params.area, "m^2");
    line("capacity", params.capacity, "A s");
    os << "# derived: a_k = " << params.a_bin(0) << ", " << params.a_bin(1)
       << ", " << params.a_bin(2) << " 1/m; 1C = " << params.i_1c() << " A/m^2\n";
    os << "# --- saturation and observer ---\n";
    line("g", sats.g, "-, observer gain");
    line("h0", sats.h0, "-, observer gain");
    line("h1", sats.h1, "-, observer gain");
    line("a0", sats.a0, "-, saturation slope");
    line("b0", sats.b0, "-, saturation bound");
    line("eps0", sats.eps0, "-, mollifier width");
    os << "# --- discretization ---\n";
    line("n1", n1, "elements in the separator");
    line("n2", n2, "elements in the electrode");
    line("n3", n3, "radial modes per particle");
    os << "# --- integration ---\n";
    line("integrator", integrator, "rk4 | rk23");
    line("dt", dt, "s, inner step");
    line("correction_period", correction_period, "s, constraint correction period Dt");
    line("rtol", rtol, "-, rk23 relative tolerance");
    line("atol_conc", atol_conc, "mol/m^3, rk23 absolute tolerance");
    line("atol_pot", atol_pot, "V, rk23 absolute tolerance");
    line("dae_mode", dae_mode ? "on" : "off", "re-solve constraints every stage");
    os << "# --- profile and stop conditions ---\n";
    line("profile", profile, "constant | schedule");
    line("rate_c", rate_c, "C-rate for constant profile");
    line("direction", direction, "charge | discharge");
    line("schedule", schedule.empty() ? std::string("\"\"") : schedule,
         "t:I pairs, s : A/m^2");
    line("t_end", t_end < 0.0 ? std::string("auto") : std::to_string(t_end), "s");
    line("v_min", v_min, "V, stop window");
    line("v_max", v_max, "V, stop window");
    line("soc0", soc0 < 0.0 ? std::string("auto") : std::to_string(soc0),
         "-, initial stoichiometry");
    line("sample_every", sample_every, "s, 0 = every step");
    os << "# --- model switches ---\n";
    line("rate_corrections", rate_corrections ? "on" : "off",
         "rate-dependent activity factor");
    line("rate_fallback", rate_fallback ? "on" : "off", "nearest-rate lookup");
    line("stoich_mode", stoich_mode, "saturated | raw_clamp");
    line("lambda_shift", lambda_shift, "-, operator shift bookkeeping");
    line("output", output, "trajectory CSV path");
  }
};

}  // namespace vssd
