#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "vssd/constraint.hpp"
#include "vssd/observer.hpp"
#include "vssd/options.hpp"
#include "vssd/profile.hpp"
#include "vssd/state.hpp"

namespace vssd {

struct IntegratorConfig {
  enum class Method { RK4Fixed, RK23Adaptive };
  Method method = Method::RK4Fixed;
  double dt = 0.5;                 // inner step [s]
  double correction_period = 3.0;  // Dt [s]
  double rtol = 1e-6;
  double atol_conc = 1e-2;   // mol/m^3
  double atol_pot = 1e-7;    // V
  bool dae_mode = false;     // re-solve constraints at every stage instead of
                             // propagating the potentials dynamically

  void validate() const {
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    if (!(correction_period >= dt))
      throw ConfigError("correction period Dt must satisfy Dt >= dt");
    if (!(rtol > 0.0 && atol_conc > 0.0 && atol_pot > 0.0))
      throw ConfigError("integrator tolerances must be positive");
  }
};

struct TrajectorySample {
  double t = 0.0;
  double current = 0.0;  // A/m^2
  double voltage = 0.0;  // V
  double soc = 0.0;
  std::array<double, 3> ybar_at_collector{0.0, 0.0, 0.0};
  double residual_norm = 0.0;
  int newton_iters = 0;
  double coulombs = 0.0;     // cumulative integral of I dt [A s / m^2]
  double wall_clock = 0.0;   // s since run start
};

struct RunSummary {
  double t_final = 0.0;
  double final_soc = 0.0;
  double total_coulombs = 0.0;
  double wall_seconds = 0.0;
  long corrections = 0;
  int max_newton_iters = 0;
  long steps = 0;
  std::string stop_reason;
  std::vector<std::string> warnings;
};

struct RunConfig {
  double t_end = 3600.0;
  double v_min = 2.0;
  double v_max = 4.2;
  double soc0 = 1.0;
  double sample_every = 0.0;  // 0: every accepted step
};

/// The reduced-order cell model: weak-form right-hand side, dynamical
/// potential propagation with the current-derivative observer, periodic
/// constraint correction, and the simulation loop.
class Simulator {
 public:
  Simulator(const ParameterSet& p, const SaturationParams& sp,
            const ModelOptions& mo, int n1, int n2, int n3,
            SolverOptions so = {})
      : p_(p), sp_(sp), mo_(mo),
        disc_(Discretization::build(p_, sp_, n1, n2, n3)),
        solver_(p_, sp_, disc_, mo_, so) {
    p_.validate();
    sp_.validate();
    mo_.rate_table.validate();
  }

  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  const Discretization& disc() const { return disc_; }
  const ConstraintSolver& constraints() const { return solver_; }
  const ParameterSet& params() const { return p_; }
  const SaturationParams& sats() const { return sp_; }
  const ModelOptions& model_options() const { return mo_; }

  double alpha_factor(double y, double rate) const {
    return mo_.rate_corrections
               ? activity_correction_rated(y, mo_.direction, rate,
                                           mo_.rate_table, mo_.rate_fallback)
               : activity_correction(y);
  }

  /// Galerkin right-hand side for the concentration state. The optional
  /// lambda bookkeeping adds the operator shift on both sides; the two
  /// contributions cancel identically and exist only to make that
  /// cancellation checkable.
  StateRate rhs(const CellState& state, const PotentialField& phi,
                double current, double rate_c,
                ReactionField* reaction_out = nullptr) const {
    ReactionField f = solver_.compute_reaction(state, phi);
    const auto& g = disc_.grid;
    const double inv_f = (1.0 - p_.t_plus0) / p_.faraday;
    const double lambda = mo_.lambda_shift;

    StateRate r = StateRate::zero_like(state);

    // electrolyte row
    Eigen::VectorXd rhs_e = -(disc_.gal.stiff_epsde * state.c1);
    if (lambda != 0.0)
      rhs_e -= lambda * (disc_.gal.mass_eps * state.c1);  // -lambda N(c) via A
    Eigen::VectorXd reaction_proj = Eigen::VectorXd::Zero(g.n_nodes());
    for (std::size_t q = 0; q < disc_.gal.rq.size(); ++q) {
      const auto& pt = disc_.gal.rq[q];
      double v = inv_f * pt.w * f.s_q[q];
      reaction_proj[pt.global.i0] += pt.global.w0 * v;
      reaction_proj[pt.global.i1] += pt.global.w1 * v;
    }
    rhs_e += reaction_proj;
    if (lambda != 0.0)
      rhs_e += lambda * (disc_.gal.mass_eps * state.c1);  // +lambda N(c) via E
    rhs_e += disc_.gal.boundary_moll * (inv_f * current);
    r.c1 = disc_.gal.mass_eps_ldlt.solve(rhs_e);
    if (!r.c1.allFinite())
      throw NumericError("electrolyte right-hand side is not finite");

    // solid rows: one radial problem per electrode node and bin
    for (int k = 0; k < 3; ++k) {
      const auto& rb = disc_.radial[k];
      const int nq = static_cast<int>(rb.quad.nodes.size());
      Eigen::VectorXd cvals(nq), cprime(nq), alpha(nq);
      for (int i = 0; i < g.n_cathode_nodes(); ++i) {
        Eigen::VectorXd coeffs = state.cs[k].row(i).transpose();
        rb.values_at_quad(coeffs, cvals);
        rb.derivs_at_quad(coeffs, cprime);
        for (int q = 0; q < nq; ++q) {
          double y = stoichiometry(cvals[q], p_.c_s_max, sp_.a0, mo_.stoich_mode);
          alpha[q] = alpha_factor(y, rate_c);
        }
        Eigen::VectorXd row =
            -rb.nonlinear_apply_values(cprime, alpha, p_.d_solid);
        if (lambda != 0.0) {
          Eigen::VectorXd proj_n = rb.project_path_integral(cprime, alpha);
          row -= lambda * proj_n;  // -lambda N(c) via A
          row += lambda * proj_n;  // +lambda N(c) via E
        }
        double src = p_.r_bin[k] * p_.r_bin[k] / p_.faraday * f.ibar_node(i, k);
        for (int j = 0; j < disc_.n3; ++j)
          row[j] += src * rb.surface_value(j) / rb.norm[j];
        if (!row.allFinite())
          throw NumericError("solid right-hand side is not finite (bin " +
                             std::to_string(k + 1) + ")");
        r.cs[k].row(i) = row.transpose();
      }
    }
    if (reaction_out) *reaction_out = std::move(f);
    return r;
  }

  /// Chain rule of the implicit potential map: X (dc/dt) + w dI/dt.
  PotentialRate potential_rate(const CellState& state, const PotentialField& phi,
                               double current, double current_rate,
                               double rate_c) const {
    auto sens = solver_.sensitivities(state, phi, current);
    StateRate cdot = rhs(state, phi, current, rate_c);
    return sens.apply(cdot, current_rate);
  }

  /// Terminal voltage: phi2 at the collector minus the grounded electrolyte
  /// potential minus the lithium-foil overpotential.
  double cell_voltage(const CellState& state, double current) const {
    double phi2_l = state.phi.phi2[disc_.grid.n_cathode_nodes() - 1];
    return phi2_l - state.phi.phi1[0] -
           foil_potential(current, state.c1_at_0(), p_);
  }

  /// Volume-weighted mean solid stoichiometry.
  double soc(const CellState& state) const {
    double num = 0.0, den = 0.0;
    auto w = cathode_trapezoid_weights();
    for (int k = 0; k < 3; ++k) {
      for (int i = 0; i < disc_.grid.n_cathode_nodes(); ++i) {
        num += p_.eps_s_bin[k] * w[i] * state.cs[k](i, 0);  // mean = mode 0
        den += p_.eps_s_bin[k] * w[i] * p_.c_s_max;
      }
    }
    return num / den;
  }

  /// Total solid lithium per electrode area [mol/m^2].
  double solid_lithium(const CellState& state) const {
    double total = 0.0;
    auto w = cathode_trapezoid_weights();
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < disc_.grid.n_cathode_nodes(); ++i)
        total += p_.eps_s_bin[k] * w[i] * state.cs[k](i, 0);
    return total;
  }

  /// Porosity-weighted electrolyte lithium per area [mol/m^2].
  double electrolyte_lithium(const CellState& state) const {
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(state.c1.size());
    return ones.dot(disc_.gal.mass_eps * state.c1);
  }

  /// Equilibrium initial potentials: phi1 = 0, phi2 = anchor = U(ybar).
  PotentialField initial_potential_guess(const CellState& state) const {
    PotentialField f = PotentialField::zero(disc_);
    double csurf = state.surface_conc(disc_, 0, 0);
    double y = stoichiometry(csurf, p_.c_s_max, sp_.a0, mo_.stoich_mode);
    double u = ocp(y, mo_.direction);
    f.phi2.setConstant(u);
    f.anchor = u;
    return f;
  }

  void correct(CellState& state, double current, SolveStats* stats = nullptr) const {
    state.phi = solver_.solve(state, current, state.phi, stats);
  }

  /// One explicit step of the coupled (c, phi) system; the observer is
  /// advanced exactly at the stage times. In dae_mode the potentials are
  /// re-solved at every stage instead.
  void step(CellState& state, ObserverState& obs, double t, double h,
            const CurrentProfile& profile, const IntegratorConfig& cfg) const {
    double current = profile.eval(t);  // constant within a step (breakpoints
                                       // are step boundaries)
    double rate_c = profile.rate_at(t);
    if (cfg.method == IntegratorConfig::Method::RK4Fixed) {
      step_rk4(state, obs, h, current, rate_c, cfg.dae_mode);
    } else {
      step_rk23_once(state, obs, h, current, rate_c, cfg.dae_mode);
    }
    obs = observer_step(obs, current, h, sp_);
  }

  using EmitCallback =
      std::function<void(const TrajectorySample&, const CellState&)>;

  RunSummary run(const CurrentProfile& profile, const IntegratorConfig& icfg,
                 const RunConfig& rcfg, const EmitCallback& emit = {}) const {
    icfg.validate();
    auto wall_start = std::chrono::steady_clock::now();
    RunSummary sum;

    CellState state = CellState::uniform(disc_, p_, rcfg.soc0);
    SolveStats stats;
    state.phi = solver_.solve(state, profile.eval(0.0),
                              initial_potential_guess(state), &stats);
    sum.corrections++;
    sum.max_newton_iters = stats.iterations;
    ObserverState obs{profile.eval(0.0), 0.0};

    double t = 0.0;
    double coulombs = 0.0;
    double next_correction = icfg.correction_period;
    double next_sample = rcfg.sample_every;
    int last_newton = stats.iterations;
    double h_adaptive = icfg.dt;
    bool warned_negative = false, warned_voltage = false;

    auto wall_now = [&] {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                           wall_start).count();
    };
    auto emit_sample = [&](double time, double res_norm) {
      if (!emit) return;
      TrajectorySample s;
      s.t = time;
      s.current = profile.eval(time);
      s.voltage = cell_voltage(state, s.current);
      s.soc = soc(state);
      int last = disc_.grid.n_cathode_nodes() - 1;
      for (int k = 0; k < 3; ++k)
        s.ybar_at_collector[k] =
            stoichiometry(state.surface_conc(disc_, k, last), p_.c_s_max,
                          sp_.a0, mo_.stoich_mode);
      s.residual_norm = res_norm;
      s.newton_iters = last_newton;
      s.coulombs = coulombs;
      s.wall_clock = wall_now();
      emit(s, state);
    };

    {
      Eigen::VectorXd r0 = solver_.residual(state, state.phi, profile.eval(0.0));
      emit_sample(0.0, r0.lpNorm<Eigen::Infinity>());
    }

    sum.stop_reason = "t_end";
    while (t < rcfg.t_end - 1e-9) {
      double target = std::min({rcfg.t_end, next_correction,
                                profile.next_breakpoint(t)});
      double h = std::min(icfg.dt, target - t);
      if (icfg.method == IntegratorConfig::Method::RK23Adaptive) {
        h = adaptive_step(state, obs, t, std::min(h_adaptive, target - t),
                          target - t, profile, icfg, &h_adaptive);
      } else {
        step(state, obs, t, h, profile, icfg);
      }
      coulombs += profile.eval(t) * h;
      t += h;
      sum.steps++;

      if (t >= next_correction - 1e-9) {
        SolveStats cs;
        correct(state, profile.eval(t), &cs);
        sum.corrections++;
        last_newton = cs.iterations;
        sum.max_newton_iters = std::max(sum.max_newton_iters, cs.iterations);
        if (cs.condition > solver_.options().condition_warn)
          sum.warnings.push_back("jacobian condition " +
                                 std::to_string(cs.condition) + " at t=" +
                                 std::to_string(t));
        next_correction += icfg.correction_period;
        check_boundedness(state);
      }

      double v = cell_voltage(state, profile.eval(t));
      if (!warned_voltage && (v < rcfg.v_min || v > rcfg.v_max)) {
        sum.warnings.push_back("voltage " + std::to_string(v) +
                               " left the window at t=" + std::to_string(t));
        warned_voltage = true;
      }
      if (!warned_negative && min_reconstructed_solid(state) < 0.0) {
        sum.warnings.push_back("reconstructed solid concentration went negative"
                               " at t=" + std::to_string(t));
        warned_negative = true;
      }

      bool stop = false;
      if (v < rcfg.v_min || v > rcfg.v_max) {
        sum.stop_reason = "voltage_window";
        stop = true;
      }
      if (t >= next_sample - 1e-9 || stop || t >= rcfg.t_end - 1e-9) {
        Eigen::VectorXd r = solver_.residual(state, state.phi, profile.eval(t));
        emit_sample(t, r.lpNorm<Eigen::Infinity>());
        next_sample = rcfg.sample_every > 0.0 ? next_sample + rcfg.sample_every
                                              : t;
      }
      if (stop) break;
    }

    sum.t_final = t;
    sum.final_soc = soc(state);
    sum.total_coulombs = coulombs;
    sum.wall_seconds = wall_now();
    final_state_ = state;
    return sum;
  }

  /// State left by the last run (handy for tests and studies).
  const CellState& last_state() const { return final_state_; }

 private:
  std::vector<double> cathode_trapezoid_weights() const {
    const auto& g = disc_.grid;
    std::vector<double> w(g.n_cathode_nodes(), 0.0);
    for (int e = g.n1; e < g.n_elements(); ++e) {
      w[e - g.n1] += 0.5 * g.h[e];
      w[e - g.n1 + 1] += 0.5 * g.h[e];
    }
    return w;
  }

  double min_reconstructed_solid(const CellState& state) const {
    double mn = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k) {
      const auto& rb = disc_.radial[k];
      Eigen::VectorXd vals;
      for (int i = 0; i < disc_.grid.n_cathode_nodes(); ++i) {
        Eigen::VectorXd coeffs = state.cs[k].row(i).transpose();
        rb.values_at_quad(coeffs, vals);
        mn = std::min(mn, vals.minCoeff());
        mn = std::min(mn, rb.surface(coeffs));
      }
    }
    mn = std::min(mn, state.c1.minCoeff());
    return mn;
  }

  /// Boundedness sentinels: the state norm and the stiffness energy of
  /// N(c) must stay finite along the trajectory.
  void check_boundedness(const CellState& state) const {
    auto w = cathode_trapezoid_weights();
    double c_norm2 = state.c1.dot(disc_.gal.mass * state.c1);
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < disc_.grid.n_cathode_nodes(); ++i)
        for (int j = 0; j < disc_.n3; ++j)
          c_norm2 += state.cs[k](i, j) * state.cs[k](i, j) *
                     disc_.radial[k].norm[j] * w[i];
    double n_energy = state.c1.dot(disc_.gal.stiff_epsde * state.c1);
    for (int k = 0; k < 3; ++k) {
      const auto& rb = disc_.radial[k];
      const int nq = static_cast<int>(rb.quad.nodes.size());
      Eigen::VectorXd cvals(nq), cprime(nq);
      for (int i = 0; i < disc_.grid.n_cathode_nodes(); ++i) {
        Eigen::VectorXd coeffs = state.cs[k].row(i).transpose();
        rb.values_at_quad(coeffs, cvals);
        rb.derivs_at_quad(coeffs, cprime);
        double acc = 0.0;
        for (int q = 0; q < nq; ++q) {
          double y = stoichiometry(cvals[q], p_.c_s_max, sp_.a0, mo_.stoich_mode);
          double ac = activity_correction(y) * cprime[q];
          acc += rb.quad.weights[q] * rb.quad.nodes[q] * rb.quad.nodes[q] * ac * ac;
        }
        n_energy += p_.d_solid * acc * w[i];
      }
    }
    if (!(std::sqrt(c_norm2) < 1e12) || !(std::sqrt(std::max(0.0, n_energy)) < 1e12))
      throw NumericError("state norm sentinel exceeded 1e12; aborting run");
  }

  PotentialField stage_potential(const CellState& state, double current,
                                 const PotentialField& carried,
                                 bool dae) const {
    if (!dae) return carried;
    return solver_.solve(state, current, carried);
  }

  void stage_derivative(const CellState& state, const PotentialField& phi,
                        double current, double current_rate, double rate_c,
                        bool dae, StateRate& cdot, PotentialRate& pdot) const {
    cdot = rhs(state, phi, current, rate_c);
    if (!dae) {
      auto sens = solver_.sensitivities(state, phi, current);
      pdot = sens.apply(cdot, current_rate);
    }
  }

  void step_rk4(CellState& state, const ObserverState& obs, double h,
                double current, double rate_c, bool dae) const {
    ObserverState obs_mid = observer_step(obs, current, 0.5 * h, sp_);
    ObserverState obs_end = observer_step(obs_mid, current, 0.5 * h, sp_);

    StateRate k1c, k2c, k3c, k4c;
    PotentialRate k1p, k2p, k3p, k4p;
    CellState y = state;

    stage_derivative(y, stage_potential(y, current, y.phi, dae), current,
                     obs.x2, rate_c, dae, k1c, k1p);
    CellState y2 = state;
    add_scaled(y2, 0.5 * h, k1c);
    if (!dae) add_scaled(y2.phi, 0.5 * h, k1p);
    stage_derivative(y2, stage_potential(y2, current, y2.phi, dae), current,
                     obs_mid.x2, rate_c, dae, k2c, k2p);
    CellState y3 = state;
    add_scaled(y3, 0.5 * h, k2c);
    if (!dae) add_scaled(y3.phi, 0.5 * h, k2p);
    stage_derivative(y3, stage_potential(y3, current, y3.phi, dae), current,
                     obs_mid.x2, rate_c, dae, k3c, k3p);
    CellState y4 = state;
    add_scaled(y4, h, k3c);
    if (!dae) add_scaled(y4.phi, h, k3p);
    stage_derivative(y4, stage_potential(y4, current, y4.phi, dae), current,
                     obs_end.x2, rate_c, dae, k4c, k4p);

    double w = h / 6.0;
    add_scaled(state, w, k1c);
    add_scaled(state, 2.0 * w, k2c);
    add_scaled(state, 2.0 * w, k3c);
    add_scaled(state, w, k4c);
    if (!dae) {
      add_scaled(state.phi, w, k1p);
      add_scaled(state.phi, 2.0 * w, k2p);
      add_scaled(state.phi, 2.0 * w, k3p);
      add_scaled(state.phi, w, k4p);
    } else {
      state.phi = solver_.solve(state, current, state.phi);
    }
    if (!state.all_finite())
      throw NumericError("state is not finite after an RK4 step");
  }

  /// One Bogacki-Shampine 3(2) attempt, without step-size control (used
  /// when the caller already fixed h, e.g. to land on a boundary).
  void step_rk23_once(CellState& state, const ObserverState& obs, double h,
                      double current, double rate_c, bool dae) const {
    double err;
    rk23_attempt(state, obs, h, current, rate_c, dae, 1e-6, 1e-2, err,
                 /*force=*/true);
  }

  /// Returns the error estimate (scaled norm) and on acceptance commits.
  bool rk23_attempt(CellState& state, const ObserverState& obs, double h,
                    double current, double rate_c, bool dae, double rtol,
                    double atol_conc, double& err_norm,
                    bool force = false) const {
    ObserverState obs_half = observer_step(obs, current, 0.5 * h, sp_);
    ObserverState obs_34 = observer_step(obs, current, 0.75 * h, sp_);
    ObserverState obs_end = observer_step(obs, current, h, sp_);

    StateRate k1c, k2c, k3c, k4c;
    PotentialRate k1p, k2p, k3p, k4p;
    stage_derivative(state, stage_potential(state, current, state.phi, dae),
                     current, obs.x2, rate_c, dae, k1c, k1p);
    CellState y2 = state;
    add_scaled(y2, 0.5 * h, k1c);
    if (!dae) add_scaled(y2.phi, 0.5 * h, k1p);
    stage_derivative(y2, stage_potential(y2, current, y2.phi, dae), current,
                     obs_half.x2, rate_c, dae, k2c, k2p);
    CellState y3 = state;
    add_scaled(y3, 0.75 * h, k2c);
    if (!dae) add_scaled(y3.phi, 0.75 * h, k2p);
    stage_derivative(y3, stage_potential(y3, current, y3.phi, dae), current,
                     obs_34.x2, rate_c, dae, k3c, k3p);

    CellState ynew = state;
    add_scaled(ynew, h * 2.0 / 9.0, k1c);
    add_scaled(ynew, h / 3.0, k2c);
    add_scaled(ynew, h * 4.0 / 9.0, k3c);
    if (!dae) {
      add_scaled(ynew.phi, h * 2.0 / 9.0, k1p);
      add_scaled(ynew.phi, h / 3.0, k2p);
      add_scaled(ynew.phi, h * 4.0 / 9.0, k3p);
    }
    stage_derivative(ynew, stage_potential(ynew, current, ynew.phi, dae),
                     current, obs_end.x2, rate_c, dae, k4c, k4p);

    // embedded 2nd-order error estimate
    auto scaled = [&](double e, double yref) {
      return std::abs(e) / (atol_conc + rtol * std::abs(yref));
    };
    double err = 0.0;
    {
      Eigen::VectorXd e = h * (-5.0 / 72.0 * k1c.c1 + 1.0 / 12.0 * k2c.c1 +
                               1.0 / 9.0 * k3c.c1 - 1.0 / 8.0 * k4c.c1);
      for (int i = 0; i < e.size(); ++i)
        err = std::max(err, scaled(e[i], ynew.c1[i]));
      for (int k = 0; k < 3; ++k) {
        Eigen::MatrixXd em = h * (-5.0 / 72.0 * k1c.cs[k] + 1.0 / 12.0 * k2c.cs[k] +
                                  1.0 / 9.0 * k3c.cs[k] - 1.0 / 8.0 * k4c.cs[k]);
        for (int i = 0; i < em.rows(); ++i)
          for (int j = 0; j < em.cols(); ++j)
            err = std::max(err, scaled(em(i, j), ynew.cs[k](i, j)));
      }
    }
    err_norm = err;
    if (err <= 1.0 || force) {
      state = ynew;
      if (dae) state.phi = solver_.solve(state, current, state.phi);
      if (!state.all_finite())
        throw NumericError("state is not finite after an RK23 step");
      return true;
    }
    return false;
  }

  double adaptive_step(CellState& state, ObserverState& obs, double t,
                       double h_try, double h_max, const CurrentProfile& profile,
                       const IntegratorConfig& cfg, double* h_next) const {
    double current = profile.eval(t);
    double rate_c = profile.rate_at(t);
    double h = std::min(h_try, h_max);
    for (int rejects = 0; rejects < 40; ++rejects) {
      double err = 0.0;
      CellState backup = state;
      if (rk23_attempt(state, obs, h, current, rate_c, cfg.dae_mode, cfg.rtol,
                       cfg.atol_conc, err)) {
        obs = observer_step(obs, current, h, sp_);
        double grow = err > 0.0 ? 0.9 * std::pow(err, -1.0 / 3.0) : 5.0;
        *h_next = std::clamp(h * std::clamp(grow, 0.2, 5.0), 1e-6, cfg.dt * 20.0);
        return h;
      }
      state = backup;
      double shrink = err > 0.0 ? 0.9 * std::pow(err, -1.0 / 3.0) : 0.5;
      h *= std::clamp(shrink, 0.1, 0.9);
    }
    throw SolverError("adaptive step rejection loop exceeded its bound", 0.0);
  }

  ParameterSet p_;
  SaturationParams sp_;
  ModelOptions mo_;
  Discretization disc_;
  ConstraintSolver solver_;
  mutable CellState final_state_;
};

}  // namespace vssd
