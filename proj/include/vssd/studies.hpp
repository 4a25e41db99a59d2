#pragma once

#include <algorithm>
#include <cmath>
#include <future>
#include <memory>
#include <string>
#include <vector>

#include "vssd/config.hpp"
#include "vssd/csv.hpp"
#include "vssd/dynamics.hpp"

namespace vssd {

/// In-memory result of a single simulation: emitted samples, optional field
/// snapshots (for RMSE studies), and the run summary.
struct CapturedRun {
  std::vector<TrajectorySample> samples;
  std::vector<Eigen::VectorXd> c1_series;
  std::vector<Eigen::MatrixXd> csurf_series;  // (cathode node) x (bin)
  RunSummary summary;
};

/// Executes one run from a config. All studies funnel through this same
/// path; they differ only in which config fields they vary.
inline CapturedRun run_simulation(const SimulationConfig& cfg,
                                  const std::string& csv_path = "",
                                  bool capture_fields = false) {
  cfg.validate();
  Simulator sim(cfg.params, cfg.sats, cfg.model_options(), cfg.n1, cfg.n2, cfg.n3);
  std::unique_ptr<TrajectoryWriter> writer;
  if (!csv_path.empty()) writer = std::make_unique<TrajectoryWriter>(csv_path);

  CapturedRun out;
  auto emit = [&](const TrajectorySample& s, const CellState& state) {
    out.samples.push_back(s);
    if (writer) writer->write(s);
    if (capture_fields) {
      out.c1_series.push_back(state.c1);
      Eigen::MatrixXd csurf(sim.disc().grid.n_cathode_nodes(), 3);
      for (int k = 0; k < 3; ++k)
        for (int i = 0; i < sim.disc().grid.n_cathode_nodes(); ++i)
          csurf(i, k) = state.surface_conc(sim.disc(), k, i);
      out.csurf_series.push_back(csurf);
    }
  };
  try {
    out.summary = sim.run(cfg.current_profile(), cfg.integrator_config(),
                          cfg.run_config(), emit);
  } catch (const SolverError& e) {
    if (writer) {
      writer->comment(std::string("solver_error: ") + e.what());
      writer->flush();
    }
    throw;
  } catch (const NumericError& e) {
    if (writer) {
      writer->comment(std::string("numeric_error: ") + e.what());
      writer->flush();
    }
    throw;
  }
  if (writer) writer->flush();
  return out;
}

namespace detail {

inline void require_aligned(const CapturedRun& a, const CapturedRun& b,
                            const char* what) {
  if (a.samples.size() != b.samples.size())
    throw ConfigError(std::string(what) +
                      ": runs produced different sample counts; use the "
                      "fixed-step integrator with matching dt");
  for (std::size_t i = 0; i < a.samples.size(); ++i)
    if (std::abs(a.samples[i].t - b.samples[i].t) > 1e-9)
      throw ConfigError(std::string(what) + ": sample grids differ");
}

inline double rmse(const std::vector<double>& d) {
  double acc = 0.0;
  for (double v : d) acc += v * v;
  return d.empty() ? 0.0 : std::sqrt(acc / d.size());
}

}  // namespace detail

struct ConvergenceRow {
  int n3 = 0;
  double rmse_voltage = 0.0;
  double rmse_solid = 0.0;       // surface concentrations, mol/m^3
  double rmse_electrolyte = 0.0; // nodal c1, mol/m^3
};

/// Voltage/field RMSE of low-order runs against a high-order reference on
/// the shared fixed-step time grid.
inline std::vector<ConvergenceRow> convergence_study(const SimulationConfig& base,
                                                     const std::vector<int>& orders,
                                                     int reference_order) {
  for (int n3 : orders)
    if (reference_order <= n3)
      throw ConfigError("reference order must exceed every studied order");
  if (base.integrator != "rk4")
    throw ConfigError("convergence study needs the fixed-step integrator");

  auto run_order = [&](int n3) {
    SimulationConfig cfg = base;
    cfg.n3 = n3;
    return run_simulation(cfg, "", /*capture_fields=*/true);
  };

  std::vector<std::future<CapturedRun>> futs;
  futs.reserve(orders.size());
  for (int n3 : orders)
    futs.push_back(std::async(std::launch::async, run_order, n3));
  CapturedRun ref = run_order(reference_order);

  std::vector<ConvergenceRow> rows;
  for (std::size_t i = 0; i < orders.size(); ++i) {
    CapturedRun run = futs[i].get();
    detail::require_aligned(run, ref, "convergence study");
    ConvergenceRow row;
    row.n3 = orders[i];
    std::vector<double> dv, ds, de;
    for (std::size_t s = 0; s < run.samples.size(); ++s) {
      dv.push_back(run.samples[s].voltage - ref.samples[s].voltage);
      const auto& a = run.csurf_series[s];
      const auto& b = ref.csurf_series[s];
      for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c) ds.push_back(a(r, c) - b(r, c));
      for (int r = 0; r < run.c1_series[s].size(); ++r)
        de.push_back(run.c1_series[s][r] - ref.c1_series[s][r]);
    }
    row.rmse_voltage = detail::rmse(dv);
    row.rmse_solid = detail::rmse(ds);
    row.rmse_electrolyte = detail::rmse(de);
    rows.push_back(row);
  }
  return rows;
}

struct DtRow {
  double correction_period = 0.0;
  double max_residual_voltage = 0.0;
  double rms_residual_voltage = 0.0;
};

/// Residual voltage |V_Dt - V_ref| against a small reference correction
/// period, on the shared time grid.
inline std::vector<DtRow> dt_study(const SimulationConfig& base,
                                   const std::vector<double>& periods,
                                   double reference_period) {
  for (double p : periods)
    if (reference_period >= p)
      throw ConfigError("reference period must be below every studied period");
  if (base.integrator != "rk4")
    throw ConfigError("dt study needs the fixed-step integrator");
  auto aligned = [&](double period) {
    double ratio = period / base.dt;
    return std::abs(ratio - std::round(ratio)) < 1e-9;
  };
  if (!aligned(reference_period))
    throw ConfigError("reference period must be a multiple of dt");
  for (double p : periods)
    if (!aligned(p))
      throw ConfigError("every studied period must be a multiple of dt");

  auto run_period = [&](double period) {
    SimulationConfig cfg = base;
    cfg.correction_period = period;
    return run_simulation(cfg);
  };
  std::vector<std::future<CapturedRun>> futs;
  for (double p : periods)
    futs.push_back(std::async(std::launch::async, run_period, p));
  CapturedRun ref = run_period(reference_period);

  std::vector<DtRow> rows;
  for (std::size_t i = 0; i < periods.size(); ++i) {
    CapturedRun run = futs[i].get();
    detail::require_aligned(run, ref, "dt study");
    DtRow row;
    row.correction_period = periods[i];
    std::vector<double> dv;
    for (std::size_t s = 0; s < run.samples.size(); ++s) {
      double d = run.samples[s].voltage - ref.samples[s].voltage;
      dv.push_back(d);
      row.max_residual_voltage = std::max(row.max_residual_voltage, std::abs(d));
    }
    row.rms_residual_voltage = detail::rmse(dv);
    rows.push_back(row);
  }
  return rows;
}

struct TimingRow {
  double rate_c = 0.0;
  double simulated_seconds = 0.0;
  double wall_seconds = 0.0;
  double ratio = 0.0;  // wall / simulated
  long corrections = 0;
};

/// Wall-clock per constant-rate run against the simulated physical time.
inline std::vector<TimingRow> timing_report(const SimulationConfig& base,
                                            const std::vector<double>& rates) {
  std::vector<TimingRow> rows;
  for (double rate : rates) {
    SimulationConfig cfg = base;
    cfg.profile = "constant";
    cfg.rate_c = rate;
    cfg.t_end = -1.0;  // auto: a full cycle at this rate
    CapturedRun run = run_simulation(cfg);
    TimingRow row;
    row.rate_c = rate;
    row.simulated_seconds = run.summary.t_final;
    row.wall_seconds = run.summary.wall_seconds;
    row.ratio = row.wall_seconds / row.simulated_seconds;
    row.corrections = run.summary.corrections;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace vssd
