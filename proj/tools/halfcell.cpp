// Batch front-end for the half-cell simulator: single runs, convergence and
// correction-period studies, timing reports, and config/grid inspection.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "vssd/vssd.hpp"

namespace {

vssd::SimulationConfig load_config(const std::string& path,
                                   const std::vector<std::string>& overrides) {
  vssd::SimulationConfig cfg;
  if (!path.empty()) cfg = vssd::SimulationConfig::load(path);
  for (const auto& kv : overrides) cfg.apply_override(kv);
  return cfg;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(vssd::detail::parse_double("list", vssd::detail::trim(item)));
  if (out.empty()) throw vssd::ConfigError("expected a comma-separated list");
  return out;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  for (double v : parse_double_list(s)) out.push_back(static_cast<int>(v));
  return out;
}

void print_summary(const vssd::RunSummary& sum) {
  std::cout << "t_final_s = " << sum.t_final << "\n"
            << "final_soc = " << sum.final_soc << "\n"
            << "total_coulombs_As_per_m2 = " << sum.total_coulombs << "\n"
            << "wall_clock_s = " << sum.wall_seconds << "\n"
            << "corrections = " << sum.corrections << "\n"
            << "max_newton_iters = " << sum.max_newton_iters << "\n"
            << "steps = " << sum.steps << "\n"
            << "stop_reason = " << sum.stop_reason << "\n"
            << "warnings = " << sum.warnings.size() << "\n";
  for (const auto& w : sum.warnings) std::cout << "# warning: " << w << "\n";
}

int cmd_run(const vssd::SimulationConfig& cfg) {
  auto run = vssd::run_simulation(cfg, cfg.output);
  print_summary(run.summary);
  std::cout << "output = " << cfg.output << "\n";
  return 0;
}

int cmd_convergence(const vssd::SimulationConfig& cfg, const std::string& orders,
                    int reference, const std::string& out_path) {
  auto rows = vssd::convergence_study(cfg, parse_int_list(orders), reference);
  std::ostringstream table;
  table << "n3,rmse_voltage_V,rmse_solid_mol_per_m3,rmse_electrolyte_mol_per_m3\n";
  for (const auto& r : rows)
    table << r.n3 << ',' << vssd::format_double(r.rmse_voltage) << ','
          << vssd::format_double(r.rmse_solid) << ','
          << vssd::format_double(r.rmse_electrolyte) << "\n";
  std::cout << table.str();
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    f << table.str();
  }
  return 0;
}

int cmd_dt_study(const vssd::SimulationConfig& cfg, const std::string& periods,
                 double reference, const std::string& out_path) {
  auto rows = vssd::dt_study(cfg, parse_double_list(periods), reference);
  std::ostringstream table;
  table << "Dt_s,max_residual_V,rms_residual_V\n";
  for (const auto& r : rows)
    table << vssd::format_double(r.correction_period) << ','
          << vssd::format_double(r.max_residual_voltage) << ','
          << vssd::format_double(r.rms_residual_voltage) << "\n";
  std::cout << table.str();
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    f << table.str();
  }
  return 0;
}

int cmd_timing(const vssd::SimulationConfig& cfg, const std::string& rates,
               const std::string& out_path) {
  auto rows = vssd::timing_report(cfg, parse_double_list(rates));
  std::ostringstream table;
  table << "rate_C,simulated_s,wall_clock_s,ratio,corrections\n";
  for (const auto& r : rows)
    table << vssd::format_double(r.rate_c) << ','
          << vssd::format_double(r.simulated_seconds) << ','
          << vssd::format_double(r.wall_seconds) << ','
          << vssd::format_double(r.ratio) << ',' << r.corrections << "\n";
  std::cout << table.str();
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    f << table.str();
  }
  return 0;
}

int cmd_describe_grid(const vssd::SimulationConfig& cfg) {
  cfg.validate();
  auto disc = vssd::Discretization::build(cfg.params, cfg.sats, cfg.n1, cfg.n2,
                                          cfg.n3);
  const auto& g = disc.grid;
  std::cout << "nodes (" << g.n_nodes() << "):";
  for (double x : g.nodes) std::cout << ' ' << x;
  std::cout << "\ninterface_x_m = " << g.x_interface
            << "\ncell_end_x_m = " << g.x_end << "\n";
  std::cout << "element: h_m de_eff k_eff eps_e reaction_zone\n";
  for (int e = 0; e < g.n_elements(); ++e)
    std::cout << "  " << e << ": " << g.h[e] << ' ' << g.de_eff[e] << ' '
              << g.k_eff[e] << ' ' << g.eps_e[e] << ' '
              << (g.in_reaction_zone_elem[e] ? "yes" : "no") << "\n";
  for (int k = 0; k < 3; ++k) {
    const auto& rb = disc.radial[k];
    std::cout << "bin " << (k + 1) << ": R_m = " << rb.radius
              << ", modes = " << rb.n_modes << ", gamma =";
    for (double gm : rb.gamma) std::cout << ' ' << gm;
    std::cout << "\n  norms =";
    for (double nm : rb.norm) std::cout << ' ' << nm;
    std::cout << "\n";
  }
  std::cout << "constraint_unknowns = "
            << (g.n_nodes() - 1) + g.n_cathode_nodes() + 1 << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"halfcell: reduced-order LFP half-cell simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "config file (key = value)");
  app.add_option("--set", overrides, "override, e.g. --set rate_c=0.5")
      ->take_all();

  std::string debug_dump;
  auto* run = app.add_subcommand("run", "run one simulation, write CSV");
  run->add_option("--debug-dump", debug_dump,
                  "dump the initial constraint residual/Jacobian CSVs to this prefix");

  std::string orders = "4,6,8";
  int reference_order = 30;
  std::string study_out;
  auto* conv = app.add_subcommand("convergence-study",
                                  "voltage/field RMSE vs a high-order reference");
  conv->add_option("--orders", orders, "comma-separated N3 list");
  conv->add_option("--reference-order", reference_order, "reference N3");
  conv->add_option("--out", study_out, "also write the table to this file");

  std::string periods = "12,6,3,1";
  double reference_period = 0.5;
  std::string dt_out;
  auto* dts = app.add_subcommand("dt-study",
                                 "residual voltage vs correction period");
  dts->add_option("--periods", periods, "comma-separated Dt list [s]");
  dts->add_option("--reference-period", reference_period, "reference Dt [s]");
  dts->add_option("--out", dt_out, "also write the table to this file");

  std::string rates = "0.1,0.2,0.5,1";
  std::string timing_out;
  auto* timing = app.add_subcommand("timing-report",
                                    "wall clock vs simulated time per rate");
  timing->add_option("--rates", rates, "comma-separated C-rates");
  timing->add_option("--out", timing_out, "also write the table to this file");

  auto* pc = app.add_subcommand("print-config", "echo the effective config");
  auto* dg = app.add_subcommand("describe-grid", "print grid and basis summary");

  CLI11_PARSE(app, argc, argv);

  try {
    vssd::SimulationConfig cfg = load_config(config_path, overrides);
    if (run->parsed()) {
      if (!debug_dump.empty()) {
        cfg.validate();
        vssd::Simulator sim(cfg.params, cfg.sats, cfg.model_options(), cfg.n1,
                            cfg.n2, cfg.n3);
        auto state = vssd::CellState::uniform(sim.disc(), cfg.params,
                                              cfg.run_config().soc0);
        state.phi = sim.constraints().solve(state, cfg.current_profile().eval(0.0),
                                            sim.initial_potential_guess(state));
        sim.constraints().dump_debug_csv(state, state.phi,
                                         cfg.current_profile().eval(0.0),
                                         debug_dump);
      }
      return cmd_run(cfg);
    }
    if (conv->parsed())
      return cmd_convergence(cfg, orders, reference_order, study_out);
    if (dts->parsed()) return cmd_dt_study(cfg, periods, reference_period, dt_out);
    if (timing->parsed()) return cmd_timing(cfg, rates, timing_out);
    if (pc->parsed()) {
      cfg.validate();
      cfg.print(std::cout);
      return 0;
    }
    if (dg->parsed()) return cmd_describe_grid(cfg);
  } catch (const vssd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const vssd::SolverError& e) {
    std::cerr << "solver error: " << e.what()
              << " (residual " << e.residual_norm << ")\n";
    return 3;
  } catch (const vssd::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
