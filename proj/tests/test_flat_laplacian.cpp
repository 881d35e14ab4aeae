#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ale/flat_laplacian.hpp"
#include "ale/function_registry.hpp"
#include "ale/quadrature.hpp"
#include "ale/radial_field.hpp"

using namespace ale;

namespace {

RadialGrid default_grid() { return RadialGrid::log_r(1e-2, 1e4, 1500); }

RadialFunction inverse_quadratic(const RadialGrid& g, double p) {
  return make_registry_function("inverse_quadratic_power", p, g);
}

}  // namespace

TEST_CASE("laplacian of the exact harmonic vanishes") {
  const RadialGrid g = default_grid();
  for (int n : {4, 6}) {
    auto ev = [n](double r, int k) {
      double fac = 1.0;
      for (int i = 0; i < k; ++i) fac *= (2.0 - n - i);
      return fac * std::pow(r, 2.0 - n - k);
    };
    const RadialFunction u =
        RadialFunction::closed_form(g, ev, RadialVariable::Radius, 4);
    const RadialFunction du = laplacian(u, n);
    double worst = 0.0;
    for (int i = 0; i < g.size(); ++i)
      worst = std::max(worst,
                       std::abs(du.value(i)) / std::pow(g.r(i), -n * 1.0));
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("laplacian of a constant vanishes") {
  const RadialGrid g = default_grid();
  auto ev = [](double, int k) { return k == 0 ? 3.7 : 0.0; };
  const RadialFunction u =
      RadialFunction::closed_form(g, ev, RadialVariable::Radius, 4);
  const RadialFunction du = laplacian(u, 4);
  for (double v : du.values()) CHECK(std::abs(v) < 1e-14);
}

TEST_CASE("laplacian matches the symbolic oracle in dimension four") {
  // u = (1+r^2)^{-1}: -(u'' + 3u'/r) = 8 (1+r^2)^{-3}
  const RadialGrid g = default_grid();
  const RadialFunction u = inverse_quadratic(g, 2.0);
  const RadialFunction du = laplacian(u, 4);
  for (int i = 0; i < g.size(); i += 37) {
    const double expect = 8.0 * std::pow(1.0 + g.r(i) * g.r(i), -3.0);
    CHECK(du.value(i) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("poisson oracle: closed-form right-hand side") {
  const RadialGrid g = default_grid();
  PoissonProblem p{4, 1, make_registry_function("harmonic_radius_laplacian",
                                                4.0, g),
                   -6.0};
  const PoissonSolution sol = solve_poisson(p);
  CHECK(sol.case_tag == "b");

  double sup = 0.0;
  for (int i = 0; i < g.size(); ++i)
    sup = std::max(sup, std::abs(sol.u.value(i) -
                                 1.0 / (1.0 + g.r(i) * g.r(i))));
  CHECK(sup < 1e-8);
  CHECK(sol.A == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(sol.A - leading_coefficient(p)) < 1e-10);

  // v = u - A r^{-2} ~ -r^{-4}
  CHECK(sol.measured_decay_v == doctest::Approx(-4.0).epsilon(0.02));
  CHECK(sol.measured_decay_u == doctest::Approx(-2.0).epsilon(0.02));
  CHECK(sol.residual_sup < 1e-6);
}

TEST_CASE("poisson zero input") {
  const RadialGrid g = default_grid();
  PoissonProblem p{4, 1,
                   RadialFunction::sampled(g,
                                           std::vector<double>(g.size(), 0.0)),
                   -6.0};
  const PoissonSolution sol = solve_poisson(p);
  for (double v : sol.u.values()) CHECK(std::abs(v) < 1e-14);
  CHECK(sol.A == doctest::Approx(0.0));
}

TEST_CASE("case-a decay transfer") {
  const RadialGrid g = default_grid();
  PoissonProblem p{4, 1, inverse_quadratic(g, 3.0), -3.0};
  const PoissonSolution sol = solve_poisson(p);
  CHECK(sol.case_tag == "a");
  CHECK(sol.A == 0.0);
  CHECK(sol.measured_decay_u == doctest::Approx(-1.0).epsilon(0.02));
}

TEST_CASE("weight validation") {
  const RadialGrid g = default_grid();
  PoissonProblem p{4, 1, inverse_quadratic(g, 1.0), -1.0};
  CHECK_THROWS_AS(solve_poisson(p), std::invalid_argument);
  p.beta = -4.0;
  CHECK_THROWS_AS(solve_poisson(p), std::invalid_argument);  // boundary case
  PoissonProblem q{4, 1, inverse_quadratic(g, 3.0), -3.0};
  CHECK_THROWS_AS(leading_coefficient(q), std::invalid_argument);
}

TEST_CASE("linearity of the solve") {
  const RadialGrid g = RadialGrid::log_r(1e-2, 1e3, 800);
  const RadialFunction f1 = inverse_quadratic(g, 6.0);
  const RadialFunction f2 = inverse_quadratic(g, 7.0);
  auto combo = [&](double r, int k) {
    return 2.0 * f1.derivative_at_r(r, k) - 0.5 * f2.derivative_at_r(r, k);
  };
  const RadialFunction fc =
      RadialFunction::closed_form(g, combo, RadialVariable::Radius, 4);
  const PoissonSolution s1 = solve_poisson({4, 1, f1, -6.0});
  const PoissonSolution s2 = solve_poisson({4, 1, f2, -7.0});
  const PoissonSolution sc = solve_poisson({4, 1, fc, -6.0});
  double worst = 0.0;
  for (int i = 0; i < g.size(); ++i)
    worst = std::max(worst, std::abs(sc.u.value(i) - 2.0 * s1.u.value(i) +
                                     0.5 * s2.u.value(i)));
  CHECK(worst < 1e-10);
}

TEST_CASE("quadrature and tridiagonal discretization agree") {
  const RadialGrid g = RadialGrid::log_r(1e-2, 1e4, 2500);
  for (double beta : {-6.0, -3.0}) {
    PoissonProblem p{4, 1, inverse_quadratic(g, -beta), beta};
    const PoissonSolution sol = solve_poisson(p);
    const RadialFunction fd = solve_poisson_fd(p, 3);
    double worst = 0.0, scale = 0.0;
    for (int i = 0; i < g.size(); ++i) {
      worst = std::max(worst, std::abs(fd.value(i) - sol.u.value(i)));
      scale = std::max(scale, std::abs(sol.u.value(i)));
    }
    CHECK(worst / scale < 1e-8);
  }
}

TEST_CASE("case-b remainder bound") {
  const RadialGrid g = default_grid();
  for (double beta : {-6.0, -4.5}) {
    PoissonProblem p{4, 1, inverse_quadratic(g, -beta), beta};
    const PoissonSolution sol = solve_poisson(p);
    CHECK(sol.case_tag == "b");
    CHECK(sol.measured_decay_v <= beta + 2.0 + 0.1);
  }
}

TEST_CASE("bounded solution operator over a family") {
  const RadialGrid g = RadialGrid::log_r(1e-2, 1e3, 700);
  const RadialFunction rho = smoothed_radius(g);
  double worst_ratio = 0.0;
  for (double beta : {-2.5, -3.0, -3.5, -2.7, -3.2, -3.8}) {
    PoissonProblem p{4, 1, inverse_quadratic(g, -beta), beta};
    const PoissonSolution sol = solve_poisson(p);
    const double nf = weighted_ck_norm(p.f, rho, beta, 0).ck_norm;
    const double nu =
        weighted_ck_norm(sol.u, rho, beta + 2.0, 0).ck_norm;
    worst_ratio = std::max(worst_ratio, nu / nf);
  }
  CHECK(worst_ratio < 3.0);  // n = 4 family stays uniformly bounded
}

TEST_CASE("compactly supported balanced source has zero coefficient") {
  const RadialGrid g = RadialGrid::log_r(1e-2, 30.0, 1200);
  PoissonProblem p{4, 1, make_registry_function("zero_mean_quartic", 0.0, g),
                   -6.0};
  CHECK(std::abs(leading_coefficient(p)) < 1e-10);
  const PoissonSolution sol = solve_poisson(p);
  CHECK(std::abs(sol.A) < 1e-10);
  CHECK(decay_order(sol.u, 0, 4.0, 6.5) < -2.5);
}

TEST_CASE("sphere-area integral identity") {
  const RadialGrid g = default_grid();
  SUBCASE("n=4 families") {
    const auto [c1, t1] = delta_radius_identity(4, 1, g);
    CHECK(t1 == doctest::Approx(4.0 * M_PI * M_PI).epsilon(1e-12));
    CHECK(c1 == doctest::Approx(t1).epsilon(1e-8));
    const auto [c2, t2] = delta_radius_identity(4, 2, g);
    CHECK(t2 == doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-12));
    CHECK(c2 == doctest::Approx(t2).epsilon(1e-8));
  }
  SUBCASE("n=6") {
    const auto [c, t] = delta_radius_identity(6, 1, g);
    CHECK(t == doctest::Approx(4.0 * std::pow(M_PI, 3)).epsilon(1e-12));
    CHECK(c == doctest::Approx(t).epsilon(1e-8));
  }
}

TEST_CASE("sphere areas") {
  CHECK(sphere_area(4) == doctest::Approx(2.0 * M_PI * M_PI));
  CHECK(sphere_area(6) == doctest::Approx(std::pow(M_PI, 3)));
  CHECK(sphere_area(3) == doctest::Approx(4.0 * M_PI));
}

TEST_CASE("symmetry of the laplacian pairing") {
  const RadialGrid g = default_grid();
  const RadialFunction u = inverse_quadratic(g, 2.0);
  const RadialFunction v = inverse_quadratic(g, 3.0);

  SUBCASE("identical arguments cancel exactly") {
    const SymmetryCheck chk = symmetry_residual(u, u, 4, -2.0, -2.0);
    CHECK(chk.residual < 1e-12);
  }
  SUBCASE("mixed decaying pair") {
    const SymmetryCheck chk = symmetry_residual(u, v, 4, -2.0, -3.0);
    CHECK(chk.residual < 1e-8);
  }
  SUBCASE("boundary case is rejected") {
    auto one = [](double, int k) { return k == 0 ? 1.0 : 0.0; };
    const RadialFunction c =
        RadialFunction::closed_form(g, one, RadialVariable::Radius, 4);
    CHECK_THROWS_AS(symmetry_residual(c, u, 4, 0.0, -2.0),
                    std::invalid_argument);
  }
}
