#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "vssd/params.hpp"
#include "vssd/radial.hpp"

using namespace vssd;

namespace {

// independent bisection oracle for tan(g) = g on (j pi, j pi + pi/2),
// formulated pole-free as sin(g) - g cos(g) = 0
double root_oracle(int j) {
  auto f = [](double x) { return std::sin(x) - x * std::cos(x); };
  double lo = j * M_PI + 1e-9, hi = j * M_PI + M_PI / 2.0 - 1e-9;
  double flo = f(lo);
  for (int it = 0; it < 400; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if ((flo <= 0.0) == (fm <= 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Simpson quadrature oracle, independent of the Gauss rule in the basis
template <typename F>
double simpson(F&& f, double a, double b, int n = 20000) {
  double h = (b - a) / n, acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

}  // namespace

TEST_CASE("eigenroots solve tan(gamma) = gamma to 1e-10") {
  auto g = eigenroots(31);
  CHECK(g[0] == 0.0);
  CHECK_THAT(g[1], Catch::Matchers::WithinAbs(4.4934094579090642, 1e-9));
  CHECK_THAT(g[2], Catch::Matchers::WithinAbs(7.7252518369377072, 1e-9));
  for (int j = 1; j <= 30; ++j) {
    CHECK(std::abs(std::tan(g[j]) - g[j]) < 1e-10);
    CHECK(g[j] > j * M_PI);
    CHECK(g[j] < j * M_PI + M_PI / 2.0);
    CHECK(g[j] > g[j - 1]);
    CHECK_THAT(g[j], Catch::Matchers::WithinAbs(root_oracle(j), 1e-11));
  }
  CHECK_THROWS_AS(eigenroots(0), ConfigError);
}

TEST_CASE("radial eigenfunctions: endpoint values, limits, Neumann ends") {
  for (double R : ParameterSet{}.r_bin) {
    auto b = RadialBasis::build(8, R);
    CHECK(b.eval(0, 0.3 * R) == 1.0);
    for (int j = 1; j < 8; ++j) {
      CHECK_THAT(b.eval(j, R),
                 Catch::Matchers::WithinRel(std::sin(b.gamma[j]) / R, 1e-12));
      // removable singularity at the center
      CHECK_THAT(b.eval(j, 0.0),
                 Catch::Matchers::WithinRel(b.gamma[j] / R, 1e-12));
      CHECK_THAT(b.eval(j, 1e-9 * R),
                 Catch::Matchers::WithinRel(b.gamma[j] / R, 1e-6));
      // Neumann derivative at the surface by centered finite difference,
      // relative to the derivative scale gamma^2/R^2
      double h = 2e-7 * R / b.gamma[j];
      double fd = (b.eval(j, R + h) - b.eval(j, R - h)) / (2.0 * h);
      double scale = b.gamma[j] * b.gamma[j] / (R * R);
      CHECK(std::abs(fd) / scale < 1e-8);
      CHECK(std::abs(b.eval_deriv(j, R)) / scale < 1e-13);
      // derivative consistency in the interior
      double r = 0.37 * R;
      double fd2 = (b.eval(j, r + h) - b.eval(j, r - h)) / (2.0 * h);
      CHECK_THAT(b.eval_deriv(j, r), Catch::Matchers::WithinRel(fd2, 1e-6));
    }
  }
}

TEST_CASE("radial mass: closed forms against quadrature oracle") {
  auto b1 = RadialBasis::build(4, 1.0);
  CHECK_THAT(b1.norm[0], Catch::Matchers::WithinRel(1.0 / 3.0, 1e-14));
  // quadrature oracle vs closed form at R = 1
  double g1 = b1.gamma[1];
  double oracle = simpson([&](double r) {
    double v = b1.eval(1, r);
    return r * r * v * v;
  }, 0.0, 1.0);
  CHECK_THAT(b1.norm[1], Catch::Matchers::WithinRel(oracle, 1e-10));
  CHECK_THAT(b1.norm[1],
             Catch::Matchers::WithinRel(0.5 * (1.0 - std::sin(2.0 * g1) / (2.0 * g1)),
                                        1e-14));
  CHECK_THAT(b1.norm[1], Catch::Matchers::WithinAbs(0.47640477538709436, 1e-12));

  for (double R : ParameterSet{}.r_bin) {
    auto b = RadialBasis::build(6, R);
    CHECK_THAT(b.norm[0], Catch::Matchers::WithinRel(R * R * R / 3.0, 1e-14));
    for (int j = 1; j < 6; ++j) {
      double q = simpson([&](double r) {
        double v = b.eval(j, r);
        return r * r * v * v;
      }, 0.0, R);
      CHECK_THAT(b.norm[j], Catch::Matchers::WithinRel(q, 1e-9));
    }
  }
}

TEST_CASE("orthogonality of the weighted basis") {
  // Cauchy-Schwarz normalization: for the mixed pair (0, j) the two modes
  // carry different units, so the cross integral is scaled by
  // sqrt(norm_i norm_j) rather than norm_i alone.
  for (double R : ParameterSet{}.r_bin) {
    auto b = RadialBasis::build(8, R);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) {
        if (i == j) continue;
        double q = 0.0;
        for (std::size_t n = 0; n < b.quad.nodes.size(); ++n) {
          double r = b.quad.nodes[n];
          q += b.quad.weights[n] * r * r * b.eval(i, r) * b.eval(j, r);
        }
        CHECK(std::abs(q) < 1e-10 * std::sqrt(b.norm[i] * b.norm[j]));
        if (i >= 1) CHECK(std::abs(q) < 1e-10 * b.norm[i]);
      }
  }
}

TEST_CASE("primitive W_j matches quadrature") {
  auto b = RadialBasis::build(5, 2.7e-7);
  double R = b.radius;
  for (int j = 0; j < 5; ++j) {
    double scale = j == 0 ? R * R * R : R * R;  // W_0 ~ r^3, W_j ~ r^2
    for (double frac : {0.2, 0.7, 1.0}) {
      double r = frac * R;
      double q = simpson([&](double s) { return s * s * b.eval(j, s); }, 0.0, r, 4000);
      CHECK_THAT(b.eval_primitive(j, r), Catch::Matchers::WithinAbs(q, 1e-9 * scale));
    }
  }
  // net lithium of the oscillatory modes vanishes at the eigenroots
  for (int j = 1; j < 5; ++j)
    CHECK(std::abs(b.eval_primitive(j, R)) < 1e-12 * R * R);
}

TEST_CASE("nonlinear radial apply: uniform, eigenrelation, scaling") {
  const double D = 4.21e-18;
  for (int n : {6, 30}) {
    auto b = RadialBasis::build(n, 1.44e-7);
    // uniform profile has no flux
    Eigen::VectorXd uniform = Eigen::VectorXd::Zero(n);
    uniform[0] = 12345.0;
    auto out = b.nonlinear_apply(uniform, [](double) { return 1.0; }, D);
    for (int j = 0; j < n; ++j) CHECK(std::abs(out[j]) < 1e-20);
    // alpha = 1 reproduces the analytic spectrum D (gamma_j / R)^2
    Eigen::VectorXd coeffs(n);
    for (int j = 0; j < n; ++j) coeffs[j] = 1.0 / (1.0 + j);
    auto diag = b.nonlinear_apply(coeffs, [](double) { return 1.0; }, D);
    for (int j = 1; j < n; ++j) {
      double expect = D * b.gamma[j] * b.gamma[j] / (b.radius * b.radius) * coeffs[j];
      CHECK_THAT(diag[j], Catch::Matchers::WithinRel(expect, 1e-8));
    }
    CHECK(std::abs(diag[0]) < 1e-8 * std::abs(diag[1]));
    // linear in the diffusivity
    auto doubled = b.nonlinear_apply(coeffs, [](double) { return 1.0; }, 2.0 * D);
    for (int j = 0; j < n; ++j)
      CHECK_THAT(doubled[j],
                 Catch::Matchers::WithinAbs(2.0 * diag[j], 1e-12 * std::abs(diag[1])));
  }
}

TEST_CASE("path-integral projection identities") {
  // with alpha = 1, N(c)(r) = c(r) - c(0); projecting onto the basis gives
  // back the coefficients except for a constant-mode shift by c(0)
  auto b = RadialBasis::build(7, 5.42e-7);
  const int nq = static_cast<int>(b.quad.nodes.size());
  Eigen::VectorXd coeffs(7);
  coeffs << 1000.0, 40.0, -25.0, 12.0, -8.0, 3.0, -1.0;
  Eigen::VectorXd cprime(nq);
  b.derivs_at_quad(coeffs, cprime);
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(nq);
  auto proj = b.project_path_integral(cprime, ones);
  double c0 = 0.0;
  for (int j = 0; j < 7; ++j) c0 += coeffs[j] * b.eval(j, 0.0);
  CHECK_THAT(proj[0], Catch::Matchers::WithinRel(coeffs[0] - c0, 1e-8));
  for (int j = 1; j < 7; ++j)
    CHECK_THAT(proj[j], Catch::Matchers::WithinRel(coeffs[j], 1e-8));
}
