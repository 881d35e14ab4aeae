#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ale/calabi.hpp"
#include "ale/radial_field.hpp"

using namespace ale;

TEST_CASE("potential value pinned by hand at m=2, t=1") {
  // s = sqrt(2), f = sqrt2 + (1/2)[log(sqrt2 - 1) - log(sqrt2 + 1)]
  //   = sqrt2 - log(1 + sqrt2)
  const double expect = std::sqrt(2.0) - std::log(1.0 + std::sqrt(2.0));
  CHECK(calabi_potential(2, 1.0) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(calabi_potential(2, 1.0) == doctest::Approx(0.53284).epsilon(1e-4));
}

TEST_CASE("potential approaches the flat one at infinity") {
  for (int m : {2, 3, 4}) {
    CHECK(std::abs(calabi_deviation(m, 1e8)) < 1e-6);
    CHECK(std::abs(calabi_deviation(m, 1e10)) <
          std::abs(calabi_deviation(m, 1e8)));
  }
}

TEST_CASE("the complex log sum is real") {
  for (int m : {2, 3, 4, 5, 6}) {
    for (double t : {1e-3, 0.17, 1.0, 42.0, 1e5}) {
      CHECK(calabi_imaginary_residue(m, t) < 1e-12);
    }
  }
}

TEST_CASE("derivative pair at m=2, t=1") {
  const auto [lt, lr] = calabi_derivatives(2, 1.0);
  CHECK(lt == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(lr == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("derivatives tend to the flat ones and the class constant is 1") {
  for (int m : {2, 3, 4}) {
    const auto [lt, lr] = calabi_derivatives(m, 1e9);
    CHECK(lt == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(lr == doctest::Approx(1.0).epsilon(1e-8));
    // t^m (Phi')^m -> 1 as t -> 0
    const double t = 1e-6;
    const auto [lt0, lr0] = calabi_derivatives(m, t);
    CHECK(std::pow(t * lt0, m) == doctest::Approx(1.0).epsilon(1e-5));
    (void)lr0;
  }
}

TEST_CASE("closed-form derivatives match finite differences of the value") {
  for (int m : {2, 3, 5}) {
    for (double t : {0.05, 0.7, 3.0, 90.0}) {
      const double h = t * 1e-2;
      for (int k = 1; k <= 4; ++k) {
        // central stencils on the closed-form values
        double fd = 0.0;
        auto f = [m](double x) { return calabi_potential(m, x); };
        switch (k) {
          case 1:
            fd = (f(t + h) - f(t - h)) / (2 * h);
            break;
          case 2:
            fd = (f(t + h) - 2 * f(t) + f(t - h)) / (h * h);
            break;
          case 3:
            fd = (f(t + 2 * h) - 2 * f(t + h) + 2 * f(t - h) -
                  f(t - 2 * h)) /
                 (2 * h * h * h);
            break;
          case 4:
            fd = (f(t + 2 * h) - 4 * f(t + h) + 6 * f(t) - 4 * f(t - h) +
                  f(t - 2 * h)) /
                 (h * h * h * h);
            break;
        }
        CHECK(calabi_derivative(m, t, k) ==
              doctest::Approx(fd).epsilon(5e-3));
      }
    }
  }
}

TEST_CASE("determinant identity with closed forms") {
  const RadialGrid g = RadialGrid::log_t(1e-4, 1e8, 2000);
  for (int m : {2, 3, 4, 5}) CHECK(ricci_flat_residual(m, g) < 1e-13);
}

TEST_CASE("determinant identity with stencil derivatives") {
  // stencil differentiation is conditioned by eps |Phi| / h^2 against the
  // t^m-sized curvature, so the window starts where the potential is no
  // longer dominated by its logarithmic part
  const RadialGrid g = RadialGrid::log_t(0.5, 1e8, 2000);
  for (int m : {2, 3, 4, 5}) CHECK(ricci_flat_residual_fd(m, g) < 1e-8);
}

TEST_CASE("transverse eigenvalue decreases toward 1") {
  for (int m : {2, 3}) {
    double prev = calabi_derivatives(m, 1e-3).first;
    for (double t = 1e-2; t < 1e6; t *= 10.0) {
      const double cur = calabi_derivatives(m, t).first;
      CHECK(cur < prev);
      CHECK(cur > 1.0);
      prev = cur;
    }
  }
}

TEST_CASE("asymptotic coefficient matches the exact value") {
  for (int m : {2, 3, 4}) {
    const double target = -1.0 / (m * (m - 1.0));
    const double fit = asymptotic_coefficient(m, 1e4, 1e8);
    CHECK(fit == doctest::Approx(target).epsilon(0.005));
  }
  CHECK_THROWS_AS(asymptotic_coefficient(2, 1e4, 2e4), std::invalid_argument);
}

TEST_CASE("sharp metric decay profile") {
  for (int m : {2, 3}) {
    for (int k : {0, 1, 2}) {
      const double slope = metric_decay_profile(m, k);
      const double target = -(2.0 * m + k);
      CHECK(slope == doctest::Approx(target).epsilon(0.05));
    }
  }
}

TEST_CASE("remainder decays at least at the tail-term rate") {
  for (int m : {2, 3}) {
    // the remainder is a difference of near-equal tails: fit where its
    // value still clears the rounding floor of the potential evaluation
    const RadialGrid g = RadialGrid::log_t(1.0, 1e4, 1024);
    auto ev = [m](double t, int k) { return calabi_remainder_chi(m, t, k); };
    const RadialFunction chi =
        RadialFunction::closed_form(g, ev, RadialVariable::SquaredRadius, 2);
    const double s0 = decay_order(chi, 0, 5.0, 30.0);
    const double s1 = decay_order(chi, 1, 5.0, 30.0);
    CHECK(s0 <= -2.0 * m + 0.1);
    CHECK(s1 <= -(2.0 * m + 1.0) + 0.1);
    // the true rate of this family is even faster: r^{2-4m}
    CHECK(s0 == doctest::Approx(2.0 - 4.0 * m).epsilon(0.05));
  }
}

TEST_CASE("potential rejects the origin") {
  CHECK_THROWS_AS(calabi_potential(2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(calabi_potential(2, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(calabi_potential(1, 1.0), std::invalid_argument);
}
