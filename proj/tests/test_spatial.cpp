#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "vssd/spatial.hpp"
#include "vssd/state.hpp"

using namespace vssd;

namespace {
Discretization make_disc(int n1 = 4, int n2 = 4, int n3 = 6) {
  ParameterSet p;
  SaturationParams sp;
  return Discretization::build(p, sp, n1, n2, n3);
}
}  // namespace

TEST_CASE("grid layout and piecewise coefficients") {
  ParameterSet p;
  auto g = SpatialGrid::build(4, 4, p);
  CHECK(g.n_nodes() == 9);
  CHECK(g.nodes.front() == 0.0);
  CHECK(g.nodes[4] == p.l_sep);  // interface node present exactly
  CHECK_THAT(g.nodes.back(), Catch::Matchers::WithinRel(p.cell_end(), 1e-15));
  for (int i = 1; i < g.n_nodes(); ++i) CHECK(g.nodes[i] > g.nodes[i - 1]);
  for (int e = 0; e < 4; ++e) {
    CHECK(g.de_eff[e] == p.de_eff_sep);
    CHECK(g.de_eff[e] == 4.028e-10);
    CHECK(g.k_eff[e] == p.k_eff_sep);
    CHECK(g.eps_e[e] == p.eps_e_sep);
    CHECK_FALSE(g.in_reaction_zone_elem[e]);
    CHECK_THAT(g.h[e], Catch::Matchers::WithinRel(p.l_sep / 4.0, 1e-14));
  }
  for (int e = 4; e < 8; ++e) {
    CHECK(g.de_eff[e] == p.de_eff_cat);
    CHECK(g.in_reaction_zone_elem[e]);
    CHECK_THAT(g.h[e], Catch::Matchers::WithinRel(p.l_cat / 4.0, 1e-14));
  }
  for (int i = 0; i <= 3; ++i) CHECK_FALSE(g.node_in_reaction_zone[i]);
  for (int i = 4; i <= 8; ++i) CHECK(g.node_in_reaction_zone[i]);
  CHECK_THROWS_AS(SpatialGrid::build(0, 4, p), ConfigError);
}

TEST_CASE("mass and stiffness structure") {
  ParameterSet p;
  auto d = make_disc();
  const auto& gal = d.gal;
  const int n = d.grid.n_nodes();

  // partition of unity: total mass equals the cell length
  CHECK_THAT(gal.mass.sum(), Catch::Matchers::WithinRel(p.cell_end(), 1e-13));

  // Neumann structure: stiffness annihilates constants (row sums zero)
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  CHECK((gal.stiff_epsde * ones).lpNorm<Eigen::Infinity>() <
        1e-12 * gal.stiff_epsde.diagonal().maxCoeff());
  CHECK((gal.stiff_unit * ones).lpNorm<Eigen::Infinity>() <
        1e-12 * gal.stiff_unit.diagonal().maxCoeff());

  // symmetry and definiteness
  CHECK((gal.mass - gal.mass.transpose()).norm() == 0.0);
  CHECK((gal.mass_eps - gal.mass_eps.transpose()).norm() == 0.0);
  CHECK((gal.stiff_epsde - gal.stiff_epsde.transpose()).norm() == 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_m(gal.mass_eps);
  CHECK(es_m.eigenvalues().minCoeff() > 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_k(gal.stiff_epsde);
  CHECK(es_k.eigenvalues().minCoeff() > -1e-18);

  // spline interpolation of a linear function is stiffness-exact: interior
  // rows of the unweighted stiffness applied to it vanish
  Eigen::VectorXd lin(n);
  for (int i = 0; i < n; ++i) lin[i] = 17.0 * d.grid.nodes[i];
  Eigen::VectorXd r = gal.stiff_unit * lin;
  for (int i = 1; i < n - 1; ++i)
    CHECK(std::abs(r[i]) < 1e-12 * std::abs(r[0]));
  // with a large constant offset the check holds up to cancellation roundoff
  Eigen::VectorXd lin2(n);
  for (int i = 0; i < n; ++i) lin2[i] = 3.0 + 17.0 * d.grid.nodes[i];
  Eigen::VectorXd r2 = gal.stiff_unit * lin2;
  double round_scale = 0.0;
  for (int i = 0; i < n; ++i)
    round_scale = std::max(round_scale,
                           gal.stiff_unit.row(i).cwiseAbs().dot(lin2.cwiseAbs()));
  for (int i = 1; i < n - 1; ++i)
    CHECK(std::abs(r2[i]) < 100.0 * 2.3e-16 * round_scale);
}

TEST_CASE("boundary mollifier functional") {
  ParameterSet p;
  SaturationParams sp;
  auto d = make_disc();
  const auto& b = d.gal.boundary_moll;
  // unit mass against the partition of unity
  CHECK_THAT(b.sum(), Catch::Matchers::WithinRel(1.0, 1e-12));
  // support is confined to the first element
  for (int i = 2; i < b.size(); ++i) CHECK(b[i] == 0.0);
  // equals the average over [0, eps0 L] for a linear profile, and is close
  // to the point value (width << element size)
  Eigen::VectorXd lin(d.grid.n_nodes());
  double slope = 5.0e5;
  for (int i = 0; i < lin.size(); ++i) lin[i] = 1000.0 + slope * d.grid.nodes[i];
  double width = sp.eps0 * p.cell_end();
  double exact_avg = 1000.0 + slope * width / 2.0;
  CHECK_THAT(b.dot(lin), Catch::Matchers::WithinRel(exact_avg, 1e-12));
  CHECK(std::abs(b.dot(lin) - lin[0]) < 1e-4 * std::abs(lin[0]));
}

TEST_CASE("stencils, interpolation, and cumulative resistance") {
  ParameterSet p;
  auto g = SpatialGrid::build(3, 5, p);
  Eigen::VectorXd f(g.n_nodes());
  for (int i = 0; i < g.n_nodes(); ++i) f[i] = 2.0 - 0.5 * g.nodes[i];
  for (double frac : {0.0, 0.12, 0.501, 0.93, 1.0}) {
    double x = frac * g.x_end;
    CHECK_THAT(g.eval(f, x), Catch::Matchers::WithinRel(2.0 - 0.5 * x, 1e-12));
  }
  // kinv is x/k_sep in the separator, then continues with the cathode slope
  double v1 = 0.5 * p.l_sep;
  CHECK_THAT(g.kinv_cumulative(v1), Catch::Matchers::WithinRel(v1 / p.k_eff_sep, 1e-13));
  double v2 = p.l_sep + 0.25 * p.l_cat;
  CHECK_THAT(g.kinv_cumulative(v2),
             Catch::Matchers::WithinRel(p.l_sep / p.k_eff_sep +
                                        0.25 * p.l_cat / p.k_eff_cat, 1e-13));

  // reaction quadrature integrates smooth functions over the zone
  auto d = make_disc(3, 5, 4);
  double total = 0.0;
  for (const auto& q : d.gal.rq) total += q.w;
  CHECK_THAT(total, Catch::Matchers::WithinRel(p.l_cat, 1e-12));
  double quad = 0.0;
  for (const auto& q : d.gal.rq) quad += q.w * std::sin(q.x / p.cell_end());
  double exact = p.cell_end() * (std::cos(p.l_sep / p.cell_end()) -
                                 std::cos(1.0));
  CHECK_THAT(quad, Catch::Matchers::WithinRel(exact, 1e-10));
}

TEST_CASE("double-integral kernels reproduce analytic cases") {
  // for S = 1 on the zone: integral_0^x kinv(u) * (length of zone after u) du
  ParameterSet p;
  auto d = make_disc();
  const auto& g = d.grid;
  const int nq = static_cast<int>(d.gal.rq.size());
  Eigen::VectorXd s_one = Eigen::VectorXd::Ones(nq);
  Eigen::VectorXd dbl1 = d.gal.a1 * s_one;
  double L1 = p.l_sep, L = p.cell_end();
  for (int i = 0; i < g.n_nodes(); ++i) {
    double x = g.nodes[i];
    // analytic Fubini: integral over s in zone of kinv(min(x, s)) ds
    auto kinv = [&](double v) { return g.kinv_cumulative(v); };
    double expect;
    if (x <= L1) {
      expect = kinv(x) * (L - L1);
    } else {
      int steps = 20000;
      double acc = 0.0, h = (L - L1) / steps;
      for (int m = 0; m < steps; ++m) {
        double s = L1 + (m + 0.5) * h;
        acc += kinv(std::min(x, s)) * h;
      }
      expect = acc;
    }
    CHECK_THAT(dbl1[i], Catch::Matchers::WithinRel(expect, 1e-6));
  }
  Eigen::VectorXd dbl2 = d.gal.a2 * s_one;
  for (int j = 0; j < g.n_cathode_nodes(); ++j) {
    double x = g.nodes[g.cathode_node(j)];
    double expect = 0.5 * (x - L1) * (x - L1);  // double integral of 1
    CHECK_THAT(dbl2[j],
               Catch::Matchers::WithinAbs(expect, 1e-12 * (L - L1) * (L - L1)));
  }
}
