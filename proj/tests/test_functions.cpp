#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "vssd/functions.hpp"

using namespace vssd;

namespace {
ParameterSet default_params() { return ParameterSet{}; }
SaturationParams default_sats() { return SaturationParams{}; }
}  // namespace

TEST_CASE("sat is odd, bounded, increasing") {
  auto sp = default_sats();
  CHECK(sat(0.0, sp) == 0.0);
  // direct evaluation of the closed form at s = 1: b0 tanh(1/2)
  CHECK_THAT(sat(1.0, sp),
             Catch::Matchers::WithinAbs(0.93583345516724576, 1e-13));
  // strict bound and monotonicity where doubles can still resolve them;
  // past |s| ~ 37 the closed form rounds onto the asymptote
  double prev = -sp.b0;
  for (double s = -30.0; s <= 30.0; s += 0.25) {
    double v = sat(s, sp);
    CHECK(std::abs(v) < sp.b0);
    CHECK(std::abs(sat(-s, sp) + v) < 1e-15);
    CHECK(v > prev);
    prev = v;
  }
  for (double s = -300.0; s <= 300.0; s += 7.0)
    CHECK(std::abs(sat(s, sp)) <= sp.b0);
  CHECK_THAT(sat(1e3, sp), Catch::Matchers::WithinAbs(sp.b0, 1e-12));
  // derivative consistency
  for (double s : {-2.0, -0.3, 0.0, 0.7, 3.1}) {
    double h = 1e-6;
    double fd = (sat(s + h, sp) - sat(s - h, sp)) / (2.0 * h);
    CHECK_THAT(sat_deriv(s, sp), Catch::Matchers::WithinAbs(fd, 1e-8));
  }
}

TEST_CASE("sat_y maps into (0,1) and is strictly increasing") {
  CHECK(sat_y(0.0, 1.0) == 0.5);
  CHECK_THAT(sat_y(1.0, 1.0),
             Catch::Matchers::WithinAbs(0.73105857863000488, 1e-15));
  CHECK_THAT(sat_y(50.0, 1.0), Catch::Matchers::WithinAbs(1.0, 1e-12));
  double prev = 0.0;
  for (double s = -30.0; s <= 30.0; s += 0.5) {
    double v = sat_y(s, 1.0);
    CHECK(v > 0.0);
    CHECK(v < 1.0);
    CHECK(v > prev);
    prev = v;
  }
  for (double s = -500.0; s <= 500.0; s += 11.0) {
    CHECK(sat_y(s, 1.0) >= 0.0);
    CHECK(sat_y(s, 1.0) <= 1.0);
  }
}

TEST_CASE("mollifier has unit mass and compact support") {
  double x0 = 72e-6, eps0 = 1e-4;
  double height = mollifier(x0 - 0.5 * eps0 * x0, x0, eps0);
  CHECK_THAT(height, Catch::Matchers::WithinRel(1.0 / 7.2e-9, 1e-12));
  CHECK(mollifier(x0 * (1.0 - 2.0 * eps0), x0, eps0) == 0.0);
  CHECK(mollifier(x0 * 1.0001, x0, eps0) == 0.0);
  // analytic mass: height * width
  CHECK_THAT(height * eps0 * x0, Catch::Matchers::WithinRel(1.0, 1e-12));
  double L = 747e-6;
  CHECK_THAT(mollifier_boundary(0.0, L, eps0) * eps0 * L,
             Catch::Matchers::WithinRel(1.0, 1e-12));
  CHECK(mollifier_boundary(2.0 * eps0 * L, L, eps0) == 0.0);
  CHECK_THROWS_AS(mollifier(0.5, 1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(mollifier(0.5, 1.0, -1e-3), ConfigError);
}

TEST_CASE("ocp branches evaluate the empirical fits") {
  CHECK_THAT(ocp(0.5, Direction::Charge),
             Catch::Matchers::WithinAbs(3.4465000167910514, 1e-12));
  CHECK_THAT(ocp(0.5, Direction::Discharge),
             Catch::Matchers::WithinAbs(3.3975652246879115, 1e-12));
  CHECK(ocp(0.3, Direction::Charge) == ocp(0.3, Direction::Charge));
  CHECK_THROWS_AS(ocp(0.0, Direction::Charge), ConfigError);
  CHECK_THROWS_AS(ocp(1.0, Direction::Discharge), ConfigError);
  CHECK_THROWS_AS(ocp(-0.1, Direction::Charge), ConfigError);
  for (Direction dir : {Direction::Charge, Direction::Discharge})
    for (double y : {0.05, 0.3, 0.5, 0.8, 0.95}) {
      double h = 1e-7;
      double fd = (ocp(y + h, dir) - ocp(y - h, dir)) / (2.0 * h);
      CHECK_THAT(ocp_deriv(y, dir), Catch::Matchers::WithinRel(fd, 1e-6));
    }
}

TEST_CASE("activity correction values and bounds") {
  CHECK_THAT(activity_correction(0.5),
             Catch::Matchers::WithinAbs(0.30002273656890583, 1e-13));
  CHECK_THAT(activity_correction(0.0), Catch::Matchers::WithinAbs(6.24, 1e-10));
  // numerically verified bounds on a 1e4-point grid: the factor stays inside
  // [0.28, 15.25] over all of [0,1], and inside [0.28, 7] on the range the
  // logistic stoichiometry map can actually reach for physical c >= 0.
  double lo_all = 1e30, hi_all = -1e30;
  for (int i = 0; i <= 10000; ++i) {
    double y = i / 10000.0;
    double a = activity_correction(y);
    CHECK(a > 0.0);
    lo_all = std::min(lo_all, a);
    hi_all = std::max(hi_all, a);
  }
  CHECK(lo_all >= 0.2);
  CHECK(hi_all <= 15.25);
  double sp_lo = sat_y(0.0, 1.0), sp_hi = sat_y(1.0, 1.0);
  for (int i = 0; i <= 10000; ++i) {
    double y = sp_lo + (sp_hi - sp_lo) * i / 10000.0;
    double a = activity_correction(y);
    CHECK(a >= 0.2);
    CHECK(a <= 7.0);
  }
  // Lipschitz-style continuity on a sampled grid
  double max_slope = 0.0;
  for (int i = 0; i < 10000; ++i) {
    double y0 = i / 10000.0, y1 = (i + 1) / 10000.0;
    max_slope = std::max(max_slope,
                         std::abs(activity_correction(y1) - activity_correction(y0)) /
                             (y1 - y0));
  }
  CHECK(max_slope < 600.0);
  CHECK_THROWS_AS(activity_correction(-0.01), ConfigError);
  CHECK_THROWS_AS(activity_correction(1.01), ConfigError);
}

TEST_CASE("rate-dependent activity correction") {
  auto table = RateCorrections::defaults();
  CHECK_THAT(activity_correction_rated(0.5, Direction::Discharge, 1.0, table),
             Catch::Matchers::WithinAbs(0.16163055254590124, 1e-13));
  CHECK_THAT(activity_correction_rated(0.0, Direction::Charge, 1.0, table),
             Catch::Matchers::WithinAbs(9.2080000000014036, 1e-12));
  // with all omegas forced to one, the charge form is rate independent
  RateCorrections ones;
  ones.rows = {{1.0, 1, 1, 1, 1, 1}, {0.2, 1, 1, 1, 1, 1}};
  for (double y : {0.1, 0.5, 0.9})
    CHECK(activity_correction_rated(y, Direction::Charge, 1.0, ones) ==
          activity_correction_rated(y, Direction::Charge, 0.2, ones));
  // nearest-rate fallback and the disabled-fallback error
  CHECK(activity_correction_rated(0.5, Direction::Discharge, 0.9, table) ==
        activity_correction_rated(0.5, Direction::Discharge, 1.0, table));
  CHECK_THROWS_AS(
      activity_correction_rated(0.5, Direction::Discharge, 0.9, table, false),
      ConfigError);
}

TEST_CASE("exchange current is saturated and zone gated") {
  auto p = default_params();
  auto sp = default_sats();
  CHECK(exchange_current(0.0, p, sp, true) == 0.0);
  double bound = 2.0 * p.i0 * std::sinh(sp.b0);
  CHECK_THAT(bound, Catch::Matchers::WithinAbs(0.24195885834736421, 1e-12));
  for (double eta : {-50.0, -1.0, -0.05, 0.05, 2.0, 80.0}) {
    CHECK(std::abs(exchange_current(eta, p, sp, true)) <= bound);
    CHECK(exchange_current(eta, p, sp, false) == 0.0);
  }
  for (double eta : {-0.08, -0.01, 0.0, 0.02, 0.1}) {
    double h = 1e-7;
    double fd = (exchange_current(eta + h, p, sp, true) -
                 exchange_current(eta - h, p, sp, true)) / (2.0 * h);
    CHECK_THAT(exchange_current_deriv(eta, p, sp, true),
               Catch::Matchers::WithinAbs(fd, 1e-6));
  }
}

TEST_CASE("surface stoichiometry") {
  auto p = default_params();
  auto sp = default_sats();
  CHECK(surface_stoichiometry(0.0, p, sp) == 0.5);
  CHECK_THAT(surface_stoichiometry(p.c_s_max, p, sp),
             Catch::Matchers::WithinAbs(0.73105857863000488, 1e-14));
  double prev = 0.0;
  for (double c = 0.0; c <= 2.0 * p.c_s_max; c += p.c_s_max / 20.0) {
    double y = surface_stoichiometry(c, p, sp);
    CHECK(y > prev);
    CHECK(y > 0.0);
    CHECK(y < 1.0);
    prev = y;
  }
  // raw-clamp alternative follows c/c_max inside the margin
  CHECK_THAT(surface_stoichiometry(0.3 * p.c_s_max, p, sp, StoichMode::RawClamp),
             Catch::Matchers::WithinAbs(0.3, 1e-12));
}

TEST_CASE("foil potential: closed form, root-find, and oddness") {
  auto p = default_params();
  CHECK(foil_potential(0.0, p.c_ini, p) == 0.0);
  // oddness for beta = 1/2 at reference concentration
  for (double I : {0.5, 2.0, 19.2})
    CHECK_THAT(foil_potential(-I, p.c_ini, p),
               Catch::Matchers::WithinAbs(-foil_potential(I, p.c_ini, p), 1e-14));
  // independent bisection oracle on the defining equation
  auto defining = [&](double I, double c, double phi) {
    double vt = p.r_gas * p.temperature / p.faraday;
    return p.i_f * std::pow(c / p.c_ini, 1.0 - p.beta_f) *
               (std::exp((1.0 - p.beta_f) * phi / vt) -
                std::exp(-p.beta_f * phi / vt)) - I;
  };
  for (double I : {-15.0, -1.0, 0.3, 5.0, 19.2}) {
    for (double c : {600.0, 1000.0, 1400.0}) {
      double lo = -1.0, hi = 1.0;
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (defining(I, c, mid) < 0.0) lo = mid; else hi = mid;
      }
      double oracle = 0.5 * (lo + hi);
      double phi = foil_potential(I, c, p);
      CHECK_THAT(phi, Catch::Matchers::WithinAbs(oracle, 1e-9));
      CHECK(std::abs(defining(I, c, phi)) < 1e-10 * std::max(1.0, std::abs(I)));
    }
  }
  // generic beta goes through the root-find and still satisfies the equation
  ParameterSet p2 = p;
  p2.beta_f = 0.37;
  for (double I : {-4.0, 0.8, 12.0}) {
    double phi = foil_potential(I, 900.0, p2);
    double vt = p2.r_gas * p2.temperature / p2.faraday;
    double res = p2.i_f * std::pow(900.0 / p2.c_ini, 1.0 - p2.beta_f) *
                     (std::exp((1.0 - p2.beta_f) * phi / vt) -
                      std::exp(-p2.beta_f * phi / vt)) - I;
    CHECK(std::abs(res) < 1e-10 * std::max(1.0, std::abs(I)));
  }
  // closed form (beta = 1/2) agrees with the generic root-find path
  ParameterSet p3 = p;
  p3.beta_f = 0.5 + 5e-13;  // nudges past the closed-form branch
  for (double I = -20.0; I <= 20.0; I += 2.5)
    if (I != 0.0)
      CHECK_THAT(foil_potential(I, p.c_ini, p3),
                 Catch::Matchers::WithinAbs(foil_potential(I, p.c_ini, p), 1e-9));
  CHECK_THROWS_AS(foil_potential(1.0, 0.0, p), ConfigError);
}

TEST_CASE("parameter validation catches bad inputs") {
  ParameterSet p = default_params();
  CHECK_NOTHROW(p.validate());
  p.t_plus0 = 1.2;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = default_params();
  p.eps_s_bin = {0.4, 0.4, 0.4};
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = default_params();
  p.l_cat = -1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  CHECK_THAT(default_params().i_1c(),
             Catch::Matchers::WithinAbs(19.217970049916805, 1e-10));
}
