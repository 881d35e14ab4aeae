#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ale/cutoff.hpp"
#include "ale/finite_difference.hpp"
#include "ale/radial_field.hpp"

using namespace ale;

TEST_CASE("grid construction and validation") {
  const RadialGrid g = RadialGrid::log_t(1e-4, 1e8, 100);
  CHECK(g.size() == 100);
  CHECK(g.t_min() == doctest::Approx(1e-4));
  CHECK(g.t_max() == doctest::Approx(1e8));
  CHECK(g.r(0) == doctest::Approx(1e-2));
  CHECK(g.log_t_step() == doctest::Approx(2.0 * g.log_r_step()));
  CHECK_THROWS_AS(RadialGrid::log_r(1.0, 10.0, 8), std::invalid_argument);
  CHECK_THROWS_AS(RadialGrid::log_r(10.0, 1.0, 64), std::invalid_argument);
}

TEST_CASE("finite-difference derivatives recover powers in x") {
  const int n = 200;
  const double h = 0.05;
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) {
    const double x = i * h;
    v[i] = std::exp(0.3 * x);
  }
  for (int k = 1; k <= 4; ++k) {
    const auto d = fd_derivative_uniform(v, h, k, 4);
    const double expect = std::pow(0.3, k) * v[n / 2];
    CHECK(d[n / 2] == doctest::Approx(expect).epsilon(1e-8));
    // one-sided closure stays accurate
    CHECK(d[0] == doctest::Approx(std::pow(0.3, k)).epsilon(1e-6));
  }
}

TEST_CASE("radius derivatives of a sampled power law") {
  const RadialGrid g = RadialGrid::log_r(0.1, 1e3, 400);
  std::vector<double> v(g.size());
  for (int i = 0; i < g.size(); ++i) v[i] = std::pow(g.r(i), -4);
  const RadialFunction f = RadialFunction::sampled(g, v);
  const auto d1 = f.derivative_r(1);
  const auto d2 = f.derivative_r(2);
  const int mid = g.size() / 2;
  const double r = g.r(mid);
  CHECK(d1[mid] == doctest::Approx(-4.0 * std::pow(r, -5)).epsilon(1e-8));
  CHECK(d2[mid] == doctest::Approx(20.0 * std::pow(r, -6)).epsilon(1e-8));
}

TEST_CASE("t derivatives through the log-t grid") {
  const RadialGrid g = RadialGrid::log_t(0.01, 1e4, 300);
  std::vector<double> v(g.size());
  for (int i = 0; i < g.size(); ++i) v[i] = std::pow(g.t(i), 1.5);
  const RadialFunction f = RadialFunction::sampled(g, v);
  const auto d1 = f.derivative_t(1);
  const auto d2 = f.derivative_t(2);
  const int mid = g.size() / 2;
  const double t = g.t(mid);
  // fourth-order stencils at h ~ 0.046
  CHECK(d1[mid] == doctest::Approx(1.5 * std::sqrt(t)).epsilon(1e-5));
  CHECK(d2[mid] == doctest::Approx(0.75 / std::sqrt(t)).epsilon(1e-4));
}

TEST_CASE("smoothed radius values and tail") {
  const RadialGrid g = RadialGrid::log_r(1e-2, 1e4, 800);
  const RadialFunction rho = smoothed_radius(g);
  CHECK(rho.evaluate_r(std::sqrt(1e-12)) == doctest::Approx(1.0));
  CHECK(rho.evaluate_r(1.0) == doctest::Approx(std::sqrt(2.0)));
  for (double v : rho.values()) CHECK(v >= 1.0);

  // rho - r ~ 1/(2r): slope -1 over [1e2, 1e4]
  std::vector<double> dev(g.size());
  for (int i = 0; i < g.size(); ++i)
    dev[i] = 1.0 / (rho.value(i) + g.r(i));  // sqrt(1+r^2) - r, stable
  const RadialFunction d = RadialFunction::sampled(g, dev);
  CHECK(decay_order(d, 0, 1e2, 1e4) == doctest::Approx(-1.0).epsilon(0.01));
}

TEST_CASE("weighted norm of the model profiles") {
  const RadialGrid g = RadialGrid::log_r(1e-2, 1e4, 1200);
  const RadialFunction rho = smoothed_radius(g);

  // f = rho^beta has unit zeroth sup
  const double beta = -2.0;
  auto ev = [beta](double r, int k) {
    return inv_quadratic_power_derivative(0.5 * beta, r, k);
  };
  const RadialFunction f =
      RadialFunction::closed_form(g, ev, RadialVariable::Radius, 4);
  const WeightedNormReport rep0 = weighted_ck_norm(f, rho, beta, 0);
  CHECK(rep0.per_order_sups[0] == doctest::Approx(1.0).epsilon(1e-12));

  // first-order sup of rho^{-2} at weight -2: rho^3 |f'| -> 2
  const WeightedNormReport rep1 = weighted_ck_norm(f, rho, beta, 1);
  CHECK(rep1.per_order_sups[1] == doctest::Approx(2.0).epsilon(0.01));
  CHECK(rep1.ck_norm == doctest::Approx(rep1.per_order_sups[0] +
                                        rep1.per_order_sups[1]));

  // monotone in the derivative order
  const WeightedNormReport rep2 = weighted_ck_norm(f, rho, beta, 2);
  CHECK(rep2.ck_norm >= rep1.ck_norm);
  CHECK(rep1.ck_norm >= rep0.ck_norm);
}

TEST_CASE("weight mismatch is flagged by unbounded growth") {
  // r^{-1} tail measured in the beta = -2 norm grows with the grid
  auto ev = [](double r, int k) {
    return inv_quadratic_power_derivative(-0.5, r, k);
  };
  double prev = 0.0;
  bool flagged = false;
  for (double r_max : {1e2, 1e4}) {
    const RadialGrid g = RadialGrid::log_r(1e-2, r_max, 600);
    const RadialFunction f =
        RadialFunction::closed_form(g, ev, RadialVariable::Radius, 4);
    const WeightedNormReport rep =
        weighted_ck_norm(f, smoothed_radius(g), -2.0, 0);
    if (prev > 0.0) CHECK(rep.ck_norm > 5.0 * prev);
    prev = rep.ck_norm;
    flagged = rep.boundary_dominated;
  }
  CHECK(flagged);
}

TEST_CASE("norm equivalence under a different radius function") {
  const RadialGrid g = RadialGrid::log_r(1e-2, 1e3, 600);
  const RadialFunction rho = smoothed_radius(g);
  std::vector<double> alt(g.size());
  for (int i = 0; i < g.size(); ++i)
    alt[i] = std::sqrt(4.0 + g.r(i) * g.r(i));
  const RadialFunction rho2 = RadialFunction::sampled(g, alt);

  auto ev = [](double r, int k) {
    return inv_quadratic_power_derivative(-1.5, r, k);
  };
  const RadialFunction f =
      RadialFunction::closed_form(g, ev, RadialVariable::Radius, 4);
  for (double beta : {-3.0, -1.0}) {
    for (int k : {0, 1, 2}) {
      const double n1 = weighted_ck_norm(f, rho, beta, k).ck_norm;
      const double n2 = weighted_ck_norm(f, rho2, beta, k).ck_norm;
      const double bound = std::pow(2.0, std::abs(beta) + k);
      CHECK(n2 / n1 <= bound * (1 + 1e-9));
      CHECK(n1 / n2 <= bound * (1 + 1e-9));
    }
  }
}

TEST_CASE("holder seminorm of a power law tracks the first-order sup") {
  const RadialGrid g = RadialGrid::log_r(1e-1, 1e3, 1200);
  const RadialFunction rho = smoothed_radius(g);
  const double beta = -2.0;
  auto ev = [beta](double r, int k) {
    return inv_quadratic_power_derivative(0.5 * beta, r, k);
  };
  const RadialFunction f =
      RadialFunction::closed_form(g, ev, RadialVariable::Radius, 4);
  const double alpha = 0.95;
  const WeightedNormReport rep = weighted_ck_norm(f, rho, beta, 0, alpha);
  const WeightedNormReport lip = weighted_ck_norm(f, rho, beta, 1, alpha);
  CHECK(rep.holder_seminorm <= 2.0 * lip.per_order_sups[1]);
  CHECK(rep.holder_seminorm >= 0.25 * lip.per_order_sups[1]);
}

TEST_CASE("decay order fits exact power laws") {
  const RadialGrid g = RadialGrid::log_r(1e-1, 1e4, 900);
  auto ev = [](double r, int k) {
    double fac = 1.0;
    for (int i = 0; i < k; ++i) fac *= (-4.0 - i);
    return fac * std::pow(r, -4.0 - k);
  };
  const RadialFunction f =
      RadialFunction::closed_form(g, ev, RadialVariable::Radius, 4);
  CHECK(decay_order(f, 0, 1.0, 1e3) == doctest::Approx(-4.0).epsilon(1e-10));
  CHECK(decay_order(f, 1, 1.0, 1e3) == doctest::Approx(-5.0).epsilon(1e-10));

  const RadialFunction zero =
      RadialFunction::sampled(g, std::vector<double>(g.size(), 0.0));
  CHECK_THROWS_AS(decay_order(zero, 0, 1.0, 1e3), std::runtime_error);
}

TEST_CASE("decay order of a product adds the exponents") {
  const RadialGrid g = RadialGrid::log_r(1.0, 1e4, 600);
  std::vector<double> a(g.size()), b(g.size()), ab(g.size());
  for (int i = 0; i < g.size(); ++i) {
    a[i] = std::pow(g.r(i), -1.5);
    b[i] = std::pow(g.r(i), -2.25);
    ab[i] = a[i] * b[i];
  }
  const double sa =
      decay_order(RadialFunction::sampled(g, a), 0, 10.0, 1e3);
  const double sb =
      decay_order(RadialFunction::sampled(g, b), 0, 10.0, 1e3);
  const double sab =
      decay_order(RadialFunction::sampled(g, ab), 0, 10.0, 1e3);
  CHECK(sab == doctest::Approx(sa + sb).epsilon(0.02));
}

TEST_CASE("cutoff transition") {
  const CutoffFunction mu;
  CHECK(mu(-2.0) == 1.0);
  CHECK(mu(0.5) == 0.0);
  CHECK(mu(-0.5) > 0.0);
  CHECK(mu(-0.5) < 1.0);
  CHECK(mu.derivative(-0.5, 1) < 0.0);

  // monotone decreasing across the transition
  double prev = 1.0;
  for (double s = -1.0; s <= 0.0; s += 0.01) {
    const double v = mu(s);
    CHECK(v <= prev + 1e-15);
    prev = v;
  }

  // shifted evaluator
  const CutoffFunction shifted(10.0);
  CHECK(shifted(8.9) == 1.0);
  CHECK(shifted(10.1) == 0.0);

  // derivatives agree with finite differences inside the transition
  for (int k = 1; k <= 4; ++k) {
    const double s = -0.37;
    const double h = 5e-3;
    double fd = 0.0;
    if (k == 1)
      fd = (mu(s + h) - mu(s - h)) / (2 * h);
    else if (k == 2)
      fd = (mu(s + h) - 2 * mu(s) + mu(s - h)) / (h * h);
    else if (k == 3)
      fd = (mu(s + 2 * h) - 2 * mu(s + h) + 2 * mu(s - h) - mu(s - 2 * h)) /
           (2 * h * h * h);
    else
      fd = (mu(s + 2 * h) - 4 * mu(s + h) + 6 * mu(s) - 4 * mu(s - h) +
            mu(s - 2 * h)) /
           (h * h * h * h);
    const double tol = k == 1 ? 1e-4 : (k <= 3 ? 1e-3 : 1e-2);
    CHECK(mu.derivative(s, k) == doctest::Approx(fd).epsilon(tol));
  }
}
