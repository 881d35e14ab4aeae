#include "ale/calabi.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "ale/finite_difference.hpp"
#include "ale/quadrature.hpp"
#include "ale/radial_field.hpp"

namespace ale {

namespace {

// accurate complex log(1 + z) for |z| < 1
std::complex<double> clog1p(std::complex<double> z) {
  const double a = 2.0 * z.real() + std::norm(z);
  return {0.5 * std::log1p(a), std::atan2(z.imag(), 1.0 + z.real())};
}

void check_args(int m, double t) {
  if (m < 2) throw std::invalid_argument("calabi: m >= 2");
  if (!(t > 0.0))
    throw std::invalid_argument(
        "calabi: t > 0 required (the potential is singular at the origin)");
}

double s_of_t(int m, double t) {
  // (t^m + 1)^{1/m}, accurate for large t
  if (t >= 1.0)
    return t * std::exp(std::log1p(std::pow(t, -m)) / m);
  return std::pow(std::pow(t, m) + 1.0, 1.0 / m);
}

// s - 1 without cancellation (s -> 1 as t -> 0)
double s_minus_one(int m, double t) {
  if (t >= 1.0) return s_of_t(m, t) - 1.0;  // s >= 2^{1/m}, safe directly
  return std::expm1(std::log1p(std::pow(t, m)) / m);
}

// sum_{j} zeta^j log(s - zeta^j) with the common log(s) removed (the
// coefficients sum to zero), so each term is zeta^j log(1 - zeta^j / s).
// The j = 0 term cancels catastrophically both as s -> 1 (through s - 1)
// and as s -> inf (through the log difference), so it gets its own two
// stable branches.
std::complex<double> log_sum(int m, double s, double s_m1) {
  std::complex<double> acc =
      s >= 2.0 ? std::log1p(-1.0 / s) : std::log(s_m1) - std::log(s);
  for (int j = 1; j < m; ++j) {
    const std::complex<double> zeta =
        std::polar(1.0, 2.0 * M_PI * j / static_cast<double>(m));
    acc += zeta * clog1p(-zeta / s);
  }
  return acc;
}

}  // namespace

double calabi_deviation(int m, double t) {
  check_args(m, t);
  const double s = s_of_t(m, t);
  double s_minus_t;
  if (t >= 1.0)
    s_minus_t = t * std::expm1(std::log1p(std::pow(t, -m)) / m);
  else
    s_minus_t = s - t;
  const std::complex<double> sum = log_sum(m, s, s_minus_one(m, t));
  if (std::abs(sum.imag()) > 1e-9)
    throw std::runtime_error("calabi: log sum failed the real-value check");
  return s_minus_t + sum.real() / m;
}

double calabi_potential(int m, double t) { return t + calabi_deviation(m, t); }

double calabi_imaginary_residue(int m, double t) {
  check_args(m, t);
  return std::abs(log_sum(m, s_of_t(m, t), s_minus_one(m, t)).imag()) / m;
}

std::pair<double, double> calabi_derivatives(int m, double t) {
  check_args(m, t);
  const double s = s_of_t(m, t);
  return {s / t, std::pow(t / s, m - 1)};
}

double calabi_derivative(int m, double t, int k) {
  check_args(m, t);
  const double s = s_of_t(m, t);
  switch (k) {
    case 0:
      return calabi_potential(m, t);
    case 1:
      return s / t;
    case 2:
      return -std::pow(s, 1 - m) / (t * t);
    case 3:
      return (m - 1) * std::pow(t, m - 3) * std::pow(s, 1 - 2 * m) +
             2.0 * std::pow(s, 1 - m) / (t * t * t);
    case 4:
      return (m - 1) * (m - 5.0) * std::pow(t, m - 4) *
                 std::pow(s, 1 - 2 * m) -
             (m - 1) * (2.0 * m - 1.0) * std::pow(t, 2 * m - 4) *
                 std::pow(s, 1 - 3 * m) -
             6.0 * std::pow(s, 1 - m) / (t * t * t * t);
    default:
      throw std::invalid_argument("calabi_derivative: order 0..4");
  }
}

double calabi_metric_deviation(int m, double t, int k) {
  check_args(m, t);
  switch (k) {
    case 0:
      // Phi' - 1 = (1 + t^{-m})^{1/m} - 1, cancellation safe
      return std::expm1(std::log1p(std::pow(t, -m)) / m);
    case 1:
      return calabi_derivative(m, t, 2);
    case 2:
      return calabi_derivative(m, t, 3);
    default:
      throw std::invalid_argument("calabi_metric_deviation: order 0..2");
  }
}

double calabi_remainder_chi(int m, double t, int k) {
  check_args(m, t);
  const double mm = static_cast<double>(m);
  switch (k) {
    case 0:
      return calabi_deviation(m, t) + std::pow(t, 1 - mm) / (mm * (mm - 1));
    case 1:
      return calabi_metric_deviation(m, t, 0) - std::pow(t, -mm) / mm;
    case 2:
      // Phi'' + t^{-m-1} = t^{-m-1} (1 - (1+t^{-m})^{(1-m)/m})
      return -std::pow(t, -mm - 1) *
             std::expm1((1.0 - mm) / mm * std::log1p(std::pow(t, -mm)));
    default:
      throw std::invalid_argument("calabi_remainder_chi: order 0..2");
  }
}

RadialKahlerPotential calabi_metric(int m, const RadialGrid& g) {
  if (m < 2) throw std::invalid_argument("calabi_metric: m >= 2");
  auto ev = [m](double t, int k) { return calabi_derivative(m, t, k); };
  auto radial = [m](double t, int) {
    return calabi_derivatives(m, t).second;  // (t/s)^{m-1}, exact
  };
  return RadialKahlerPotential(
      m, RadialFunction::closed_form(g, ev, RadialVariable::SquaredRadius, 4),
      1.0, radial);
}

double ricci_flat_residual(int m, const RadialGrid& g) {
  if (m < 2) throw std::invalid_argument("ricci_flat_residual: m >= 2");
  double worst = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    const auto [lt, lr] = calabi_derivatives(m, g.t(i));
    worst = std::max(worst, std::abs(std::pow(lt, m - 1) * lr - 1.0));
  }
  return worst;
}

double ricci_flat_residual_fd(int m, const RadialGrid& g, int accuracy) {
  if (m < 2) throw std::invalid_argument("ricci_flat_residual_fd: m >= 2");
  std::vector<double> phi(g.size());
  for (int i = 0; i < g.size(); ++i) phi[i] = calabi_potential(m, g.t(i));
  const RadialFunction f = RadialFunction::sampled(g, std::move(phi));
  const auto d1 = f.derivative_t(1, accuracy);
  const auto d2 = f.derivative_t(2, accuracy);
  // one-sided closures carry much larger stencil constants; take the max
  // over nodes with full central support
  const int guard = accuracy == 6 ? 4 : 3;
  double worst = 0.0;
  for (int i = guard; i < g.size() - guard; ++i) {
    const double lt = d1[i];
    const double lr = d1[i] + g.t(i) * d2[i];
    worst = std::max(worst, std::abs(std::pow(lt, m - 1) * lr - 1.0));
  }
  return worst;
}

double asymptotic_coefficient(int m, double t_lo, double t_hi) {
  if (m < 2) throw std::invalid_argument("asymptotic_coefficient: m >= 2");
  if (!(t_lo > 0.0) || !(t_hi >= 4.0 * t_lo))
    throw std::invalid_argument(
        "asymptotic_coefficient: window too small for a stable fit");
  const int n = 256;
  std::vector<double> ts(n), dev(n);
  const double lx0 = std::log(t_lo);
  const double dx = (std::log(t_hi) - lx0) / (n - 1);
  for (int i = 0; i < n; ++i) {
    ts[i] = std::exp(lx0 + i * dx);
    dev[i] = calabi_deviation(m, ts[i]);
  }
  const double powers[3] = {0.0, 1.0 - m, static_cast<double>(-m)};
  const auto coef = fit_power_basis(ts, dev, powers);
  return coef[1];
}

double metric_decay_profile(int m, int k) {
  if (m < 2) throw std::invalid_argument("metric_decay_profile: m >= 2");
  if (k < 0 || k > 2)
    throw std::invalid_argument("metric_decay_profile: k in {0,1,2}");
  // fit window r in [1e2, 1e4]; the profile is sampled a little wider
  const RadialGrid g = RadialGrid::log_t(1e3, 1e9, 1024);
  auto ev = [m](double t, int j) { return calabi_metric_deviation(m, t, j); };
  const RadialFunction dev =
      RadialFunction::closed_form(g, ev, RadialVariable::SquaredRadius, 2);
  return decay_order(dev, k, 1e2, 1e4);
}

}  // namespace ale
