#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <optional>
#include <string>

#include "vssd/errors.hpp"
#include "vssd/functions.hpp"
#include "vssd/options.hpp"
#include "vssd/state.hpp"

namespace vssd {

/// Reaction-rate field evaluated at the reaction-zone quadrature points and
/// at the electrode nodes, together with the derivatives the Jacobian and
/// the sensitivity maps need.
struct ReactionField {
  Eigen::MatrixXd ibar_q;         // (nq x 3) per-bin rate
  Eigen::MatrixXd dibar_deta_q;   // (nq x 3)
  Eigen::MatrixXd dibar_dcsurf_q; // (nq x 3) chain rule through U(ybar)
  Eigen::VectorXd s_q;            // sum_k a_k ibar_k
  Eigen::VectorXd ds_deta_q;      // sum_k a_k d ibar_k / d eta
  Eigen::MatrixXd ibar_node;      // (n_cat x 3)
  Eigen::MatrixXd ybar_node;      // (n_cat x 3)
  Eigen::MatrixXd csurf_node;     // (n_cat x 3)
};

struct SolveStats {
  int iterations = 0;
  double residual_norm = 0.0;
  double condition = 0.0;
  bool used_rescue = false;
};

struct SolverOptions {
  double tol_factor = 1e-8;   // tolerance is tol_factor * max(1, |I|)
  int max_iterations = 50;
  int max_backtracks = 8;
  double condition_warn = 1e12;
};

/// Solves the algebraic potential constraints by damped Newton iteration
/// with the analytical block Jacobian, and exposes the implicit-function
/// sensitivities used by the fully dynamical propagation.
///
/// Unknowns: phi1 at nodes 1..N (grounded at node 0), phi2 at the
/// electrode nodes, and the anchor scalar phi2(L1).
class ConstraintSolver {
 public:
  ConstraintSolver(const ParameterSet& p, const SaturationParams& sp,
                   const Discretization& d, const ModelOptions& mo,
                   SolverOptions so = {})
      : p_(p), sp_(sp), d_(d), mo_(mo), so_(so) {
    kappa_d_ = 2.0 * p.r_gas * p.temperature * (1.0 - p.t_plus0) /
               (p.faraday * p.c_ini);
  }

  int n_unknowns() const {
    return (d_.grid.n_nodes() - 1) + d_.grid.n_cathode_nodes() + 1;
  }

  ReactionField compute_reaction(const CellState& state,
                                 const PotentialField& phi) const {
    const auto& g = d_.grid;
    const auto& rq = d_.gal.rq;
    const int nq = static_cast<int>(rq.size());
    const int ncat = g.n_cathode_nodes();
    ReactionField f;
    f.csurf_node.resize(ncat, 3);
    f.ybar_node.resize(ncat, 3);
    f.ibar_node.resize(ncat, 3);
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < ncat; ++i)
        f.csurf_node(i, k) = state.surface_conc(d_, k, i);
    for (int i = 0; i < ncat; ++i) {
      int gi = g.cathode_node(i);
      double eta_base = phi.phi2[i] - phi.phi1[gi];
      for (int k = 0; k < 3; ++k) {
        double y = stoichiometry(f.csurf_node(i, k), p_.c_s_max, sp_.a0,
                                 mo_.stoich_mode);
        f.ybar_node(i, k) = y;
        double eta = eta_base - ocp(y, mo_.direction);
        f.ibar_node(i, k) =
            exchange_current(eta, p_, sp_, g.node_in_reaction_zone[gi]);
      }
    }
    f.ibar_q.resize(nq, 3);
    f.dibar_deta_q.resize(nq, 3);
    f.dibar_dcsurf_q.resize(nq, 3);
    f.s_q.resize(nq);
    f.ds_deta_q.resize(nq);
    for (int q = 0; q < nq; ++q) {
      const auto& pt = rq[q];
      double phi1_q = pt.global.w0 * phi.phi1[pt.global.i0] +
                      pt.global.w1 * phi.phi1[pt.global.i1];
      double phi2_q = pt.cathode.w0 * phi.phi2[pt.cathode.i0] +
                      pt.cathode.w1 * phi.phi2[pt.cathode.i1];
      double s = 0.0, ds = 0.0;
      for (int k = 0; k < 3; ++k) {
        double csurf = pt.cathode.w0 * f.csurf_node(pt.cathode.i0, k) +
                       pt.cathode.w1 * f.csurf_node(pt.cathode.i1, k);
        double y = stoichiometry(csurf, p_.c_s_max, sp_.a0, mo_.stoich_mode);
        double eta = phi2_q - phi1_q - ocp(y, mo_.direction);
        double ib = exchange_current(eta, p_, sp_, true);
        double dib = exchange_current_deriv(eta, p_, sp_, true);
        f.ibar_q(q, k) = ib;
        f.dibar_deta_q(q, k) = dib;
        f.dibar_dcsurf_q(q, k) =
            dib * (-ocp_deriv(y, mo_.direction)) *
            stoichiometry_deriv(csurf, p_.c_s_max, sp_.a0, mo_.stoich_mode);
        s += p_.a_bin(k) * ib;
        ds += p_.a_bin(k) * dib;
      }
      f.s_q[q] = s;
      f.ds_deta_q[q] = ds;
    }
    return f;
  }

  /// Discretized operator triple [k_eff (phi1 - O1); sigma (phi2 - O2); O3].
  Eigen::VectorXd residual(const CellState& state, const PotentialField& phi,
                           double current) const {
    return residual_impl(state, phi, current, compute_reaction(state, phi));
  }

  Eigen::VectorXd residual_impl(const CellState& state, const PotentialField& phi,
                                double current, const ReactionField& f) const {
    const auto& g = d_.grid;
    const int n_phi1 = g.n_nodes() - 1;
    const int ncat = g.n_cathode_nodes();
    Eigen::VectorXd r(n_unknowns());
    double c1_0 = state.c1_at_0();
    Eigen::VectorXd dbl1 = d_.gal.a1 * f.s_q;  // per global node
    Eigen::VectorXd dbl2 = d_.gal.a2 * f.s_q;  // per cathode node
    double total = f.s_q.size() > 0
                       ? [&] {
                           double t = 0.0;
                           for (std::size_t q = 0; q < d_.gal.rq.size(); ++q)
                             t += d_.gal.rq[q].w * f.s_q[q];
                           return t;
                         }()
                       : 0.0;
    for (int i = 1; i < g.n_nodes(); ++i) {
      double o1 = -kappa_d_ * (state.c1[i] - c1_0) + dbl1[i];
      r[i - 1] = g.node_k_eff[i] * (phi.phi1[i] - o1);
    }
    for (int j = 0; j < ncat; ++j)
      r[n_phi1 + j] = p_.sigma_eff * (phi.phi2[j] - phi.anchor) - dbl2[j];
    r[n_phi1 + ncat] = current + total;
    if (!r.allFinite())
      throw NumericError("constraint residual is not finite");
    return r;
  }

  /// Analytical derivative of the residual with respect to the unknown
  /// vector [phi1(1..); phi2; anchor].
  Eigen::MatrixXd jacobian(const CellState& state, const PotentialField& phi,
                           double current) const {
    return jacobian_impl(compute_reaction(state, phi));
  }

  Eigen::MatrixXd jacobian_impl(const ReactionField& f) const {
    const auto& g = d_.grid;
    const auto& rq = d_.gal.rq;
    const int nq = static_cast<int>(rq.size());
    const int n_nodes = g.n_nodes();
    const int n_phi1 = n_nodes - 1;
    const int ncat = g.n_cathode_nodes();
    const int n = n_unknowns();
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);

    // dS_q / d phi1_m and / d phi2_m scatter through the stencils
    Eigen::MatrixXd ds_dphi1 = Eigen::MatrixXd::Zero(nq, n_nodes);
    Eigen::MatrixXd ds_dphi2 = Eigen::MatrixXd::Zero(nq, ncat);
    for (int q = 0; q < nq; ++q) {
      const auto& pt = rq[q];
      double dsq = f.ds_deta_q[q];
      ds_dphi1(q, pt.global.i0) -= dsq * pt.global.w0;
      ds_dphi1(q, pt.global.i1) -= dsq * pt.global.w1;
      ds_dphi2(q, pt.cathode.i0) += dsq * pt.cathode.w0;
      ds_dphi2(q, pt.cathode.i1) += dsq * pt.cathode.w1;
    }

    for (int i = 1; i < n_nodes; ++i) {
      double ki = g.node_k_eff[i];
      int row = i - 1;
      jac(row, row) += ki;
      for (int m = 1; m < n_nodes; ++m) {
        double acc = 0.0;
        for (int q = 0; q < nq; ++q) acc += d_.gal.a1(i, q) * ds_dphi1(q, m);
        jac(row, m - 1) -= ki * acc;
      }
      for (int m = 0; m < ncat; ++m) {
        double acc = 0.0;
        for (int q = 0; q < nq; ++q) acc += d_.gal.a1(i, q) * ds_dphi2(q, m);
        jac(row, n_phi1 + m) -= ki * acc;
      }
    }
    for (int j = 0; j < ncat; ++j) {
      int row = n_phi1 + j;
      jac(row, n_phi1 + j) += p_.sigma_eff;
      jac(row, n_phi1 + ncat) = -p_.sigma_eff;  // anchor column
      for (int m = 1; m < n_nodes; ++m) {
        double acc = 0.0;
        for (int q = 0; q < nq; ++q) acc += d_.gal.a2(j, q) * ds_dphi1(q, m);
        jac(row, m - 1) -= acc;
      }
      for (int m = 0; m < ncat; ++m) {
        double acc = 0.0;
        for (int q = 0; q < nq; ++q) acc += d_.gal.a2(j, q) * ds_dphi2(q, m);
        jac(row, n_phi1 + m) -= acc;
      }
    }
    {
      int row = n_phi1 + ncat;
      for (int m = 1; m < n_nodes; ++m) {
        double acc = 0.0;
        for (int q = 0; q < nq; ++q) acc += rq[q].w * ds_dphi1(q, m);
        jac(row, m - 1) += acc;
      }
      for (int m = 0; m < ncat; ++m) {
        double acc = 0.0;
        for (int q = 0; q < nq; ++q) acc += rq[q].w * ds_dphi2(q, m);
        jac(row, n_phi1 + m) += acc;
      }
    }
    return jac;
  }

  /// Directional derivative of the residual with respect to the cell state
  /// (concentrations), applied to a state rate.
  Eigen::VectorXd residual_state_derivative(const CellState& state,
                                            const PotentialField& phi,
                                            const ReactionField& f,
                                            const StateRate& rate) const {
    const auto& g = d_.grid;
    const auto& rq = d_.gal.rq;
    const int nq = static_cast<int>(rq.size());
    const int n_phi1 = g.n_nodes() - 1;
    const int ncat = g.n_cathode_nodes();

    // surface-concentration rates per bin and node
    Eigen::MatrixXd csurf_dot(ncat, 3);
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < ncat; ++i) {
        double v = 0.0;
        for (int j = 0; j < d_.n3; ++j)
          v += rate.cs[k](i, j) * d_.radial[k].surface_value(j);
        csurf_dot(i, k) = v;
      }
    Eigen::VectorXd s_dot(nq);
    for (int q = 0; q < nq; ++q) {
      const auto& pt = rq[q];
      double acc = 0.0;
      for (int k = 0; k < 3; ++k) {
        double cd = pt.cathode.w0 * csurf_dot(pt.cathode.i0, k) +
                    pt.cathode.w1 * csurf_dot(pt.cathode.i1, k);
        acc += p_.a_bin(k) * f.dibar_dcsurf_q(q, k) * cd;
      }
      s_dot[q] = acc;
    }
    Eigen::VectorXd out(n_unknowns());
    Eigen::VectorXd dbl1 = d_.gal.a1 * s_dot;
    Eigen::VectorXd dbl2 = d_.gal.a2 * s_dot;
    double c1dot_0 = rate.c1[0];
    for (int i = 1; i < g.n_nodes(); ++i) {
      double o1_dot = -kappa_d_ * (rate.c1[i] - c1dot_0) + dbl1[i];
      out[i - 1] = -g.node_k_eff[i] * o1_dot;
    }
    for (int j = 0; j < ncat; ++j) out[n_phi1 + j] = -dbl2[j];
    double total = 0.0;
    for (int q = 0; q < nq; ++q) total += rq[q].w * s_dot[q];
    out[n_phi1 + ncat] = total;
    return out;
  }

  /// Implicit-function sensitivities at a solved point: a factored Jacobian
  /// that maps state rates (and dI/dt) into potential rates.
  struct Sensitivities {
    const ConstraintSolver* solver = nullptr;
    CellState const* state = nullptr;
    PotentialField phi;
    ReactionField reaction;
    Eigen::FullPivLU<Eigen::MatrixXd> lu;
    Eigen::VectorXd w;  // d phi / d I

    PotentialRate apply(const StateRate& rate, double current_rate) const {
      Eigen::VectorXd rhs =
          -solver->residual_state_derivative(*state, phi, reaction, rate);
      Eigen::VectorXd du = lu.solve(rhs) + w * current_rate;
      return solver->unpack_rate(du);
    }
  };

  Sensitivities sensitivities(const CellState& state, const PotentialField& phi,
                              double current) const {
    Sensitivities s;
    s.solver = this;
    s.state = &state;
    s.phi = phi;
    s.reaction = compute_reaction(state, phi);
    Eigen::MatrixXd jac = jacobian_impl(s.reaction);
    s.lu.compute(jac);
    if (!s.lu.isInvertible())
      throw SingularJacobianError("constraint Jacobian is singular (sensitivities)");
    Eigen::VectorXd dr_di = Eigen::VectorXd::Zero(n_unknowns());
    dr_di[n_unknowns() - 1] = 1.0;  // only the current-balance row sees I
    s.w = s.lu.solve(-dr_di);
    return s;
  }

  /// Damped Newton with backtracking line search. A near-singular or
  /// stalled start (deeply saturated reaction) is rescued once by a scalar
  /// bisection that shifts phi2 uniformly until the current balance closes.
  PotentialField solve(const CellState& state, double current,
                       const PotentialField& guess, SolveStats* stats = nullptr,
                       std::optional<double> tol_override = {}) const {
    PotentialField f = guess;
    f.phi1[0] = 0.0;
    const double tol =
        tol_override.value_or(so_.tol_factor * std::max(1.0, std::abs(current)));
    bool rescued = false;
    Eigen::VectorXd r = residual(state, f, current);
    double rn = r.lpNorm<Eigen::Infinity>();
    int iter = 0;
    for (; iter <= so_.max_iterations; ++iter) {
      if (rn < tol) {
        if (stats) {
          stats->iterations = iter;
          stats->residual_norm = rn;
          stats->used_rescue = rescued;
          Eigen::MatrixXd jac = jacobian(state, f, current);
          Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
          double smin = svd.singularValues().minCoeff();
          stats->condition =
              smin > 0.0 ? svd.singularValues().maxCoeff() / smin
                         : std::numeric_limits<double>::infinity();
        }
        return f;
      }
      if (iter == so_.max_iterations) break;
      Eigen::MatrixXd jac = jacobian(state, f, current);
      Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
      if (!lu.isInvertible()) {
        if (!rescued) {
          rescue(state, current, f);
          rescued = true;
          r = residual(state, f, current);
          rn = r.lpNorm<Eigen::Infinity>();
          continue;
        }
        throw SingularJacobianError("constraint Jacobian is singular");
      }
      Eigen::VectorXd du = lu.solve(-r);
      double lambda = 1.0;
      bool accepted = false;
      for (int bt = 0; bt <= so_.max_backtracks; ++bt) {
        PotentialField trial = f;
        apply_update(trial, lambda * du);
        Eigen::VectorXd rt = residual(state, trial, current);
        double rtn = rt.lpNorm<Eigen::Infinity>();
        if (rtn < rn * (1.0 - 1e-4 * lambda) || rtn < tol) {
          f = trial;
          r = rt;
          rn = rtn;
          accepted = true;
          break;
        }
        lambda *= 0.5;
      }
      if (!accepted) {
        if (!rescued) {
          rescue(state, current, f);
          rescued = true;
          r = residual(state, f, current);
          rn = r.lpNorm<Eigen::Infinity>();
          continue;
        }
        throw SolverError("constraint Newton line search stalled", rn);
      }
    }
    throw SolverError("constraint Newton exceeded max iterations", rn);
  }

  /// Current-balance residual O3 for a given field (diagnostic).
  double current_balance(const CellState& state, const PotentialField& phi,
                         double current) const {
    auto f = compute_reaction(state, phi);
    double total = 0.0;
    for (std::size_t q = 0; q < d_.gal.rq.size(); ++q)
      total += d_.gal.rq[q].w * f.s_q[q];
    return current + total;
  }

  /// Discrete collector flux built from the integral representation:
  /// sigma * dphi2/dx at x = L equals the reaction integral over the zone.
  double collector_flux(const CellState& state, const PotentialField& phi) const {
    auto f = compute_reaction(state, phi);
    double total = 0.0;
    for (std::size_t q = 0; q < d_.gal.rq.size(); ++q)
      total += d_.gal.rq[q].w * f.s_q[q];
    return total;  // = sigma_eff * phi2'(L) in the representation
  }

  double kappa_d() const { return kappa_d_; }

  void dump_debug_csv(const CellState& state, const PotentialField& phi,
                      double current, const std::string& prefix) const {
    Eigen::VectorXd r = residual(state, phi, current);
    Eigen::MatrixXd jac = jacobian(state, phi, current);
    std::ofstream fr(prefix + "_residual.csv");
    fr << "row,value\n";
    for (int i = 0; i < r.size(); ++i) fr << i << "," << r[i] << "\n";
    std::ofstream fj(prefix + "_jacobian.csv");
    for (int i = 0; i < jac.rows(); ++i) {
      for (int j = 0; j < jac.cols(); ++j)
        fj << jac(i, j) << (j + 1 < jac.cols() ? "," : "");
      fj << "\n";
    }
  }

  PotentialRate unpack_rate(const Eigen::VectorXd& du) const {
    const auto& g = d_.grid;
    PotentialRate pr;
    pr.phi1 = Eigen::VectorXd::Zero(g.n_nodes());
    pr.phi2.resize(g.n_cathode_nodes());
    for (int i = 1; i < g.n_nodes(); ++i) pr.phi1[i] = du[i - 1];
    for (int j = 0; j < g.n_cathode_nodes(); ++j)
      pr.phi2[j] = du[g.n_nodes() - 1 + j];
    pr.anchor = du[du.size() - 1];
    return pr;
  }

  const SolverOptions& options() const { return so_; }

 private:
  void apply_update(PotentialField& f, const Eigen::VectorXd& du) const {
    const auto& g = d_.grid;
    for (int i = 1; i < g.n_nodes(); ++i) f.phi1[i] += du[i - 1];
    for (int j = 0; j < g.n_cathode_nodes(); ++j)
      f.phi2[j] += du[g.n_nodes() - 1 + j];
    f.anchor += du[du.size() - 1];
  }

  /// Bisection on a uniform phi2 shift until the current balance closes.
  /// O3 is strictly increasing in the shift, so the bracket is reliable
  /// whenever |I| stays below the saturated reaction capability.
  void rescue(const CellState& state, double current, PotentialField& f) const {
    auto o3 = [&](double shift) {
      PotentialField tmp = f;
      tmp.phi2.array() += shift;
      tmp.anchor += shift;
      return current_balance(state, tmp, current);
    };
    double lo = -10.0, hi = 10.0;
    double flo = o3(lo), fhi = o3(hi);
    if (flo > 0.0 || fhi < 0.0) return;  // no bracket; let Newton report
    for (int it = 0; it < 120; ++it) {
      double mid = 0.5 * (lo + hi);
      double fm = o3(mid);
      if (fm <= 0.0) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
      if (hi - lo < 1e-16 * std::max(1.0, std::abs(lo))) break;
    }
    double shift = 0.5 * (lo + hi);
    f.phi2.array() += shift;
    f.anchor += shift;
  }

  const ParameterSet& p_;
  const SaturationParams& sp_;
  const Discretization& d_;
  const ModelOptions& mo_;
  SolverOptions so_;
  double kappa_d_ = 0.0;
};

}  // namespace vssd
