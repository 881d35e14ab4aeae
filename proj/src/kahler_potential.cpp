#include "ale/kahler_potential.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ale {

RadialKahlerPotential::RadialKahlerPotential(int m, RadialFunction phi,
                                             double class_constant,
                                             RadialEvaluator radial_eigenvalue)
    : m_(m),
      phi_(std::move(phi)),
      class_constant_(class_constant),
      radial_eig_(std::move(radial_eigenvalue)) {
  if (m_ < 2) throw std::invalid_argument("RadialKahlerPotential: m >= 2");
  if (class_constant_ < 0.0)
    throw std::invalid_argument("RadialKahlerPotential: class constant >= 0");
  if (!phi_.valid())
    throw std::invalid_argument("RadialKahlerPotential: missing potential");

  const auto lt = eigenvalue_transverse();
  const auto lr = eigenvalue_radial();
  for (int i = 0; i < phi_.grid().size(); ++i) {
    if (!(lt[i] > 0.0) || !(lr[i] > 0.0))
      throw std::invalid_argument(
          "RadialKahlerPotential: metric not positive at node " +
          std::to_string(i) + " (t = " + std::to_string(phi_.grid().t(i)) +
          ")");
  }
}

RadialKahlerPotential RadialKahlerPotential::flat(const RadialGrid& g, int m) {
  auto ev = [](double t, int k) -> double {
    switch (k) {
      case 0:
        return t;
      case 1:
        return 1.0;
      default:
        return 0.0;
    }
  };
  auto one = [](double, int) { return 1.0; };
  return RadialKahlerPotential(
      m, RadialFunction::closed_form(g, ev, RadialVariable::SquaredRadius, 4),
      0.0, one);
}

std::vector<double> RadialKahlerPotential::eigenvalue_transverse(
    int accuracy) const {
  return phi_.derivative_t(1, accuracy);
}

std::vector<double> RadialKahlerPotential::eigenvalue_radial(
    int accuracy) const {
  const auto& g = phi_.grid();
  std::vector<double> out(g.size());
  if (radial_eig_ && phi_.analytic_order() >= 2) {
    for (int i = 0; i < g.size(); ++i) out[i] = radial_eig_(g.t(i), 0);
    return out;
  }
  const auto d1 = phi_.derivative_t(1, accuracy);
  const auto d2 = phi_.derivative_t(2, accuracy);
  for (int i = 0; i < g.size(); ++i) out[i] = d1[i] + g.t(i) * d2[i];
  return out;
}

std::vector<double> RadialKahlerPotential::density(int accuracy) const {
  const auto lt = eigenvalue_transverse(accuracy);
  const auto lr = eigenvalue_radial(accuracy);
  std::vector<double> out(lt.size());
  for (std::size_t i = 0; i < lt.size(); ++i)
    out[i] = std::pow(lt[i], m_ - 1) * lr[i];
  return out;
}

double RadialKahlerPotential::positivity_margin(int accuracy) const {
  const auto lt = eigenvalue_transverse(accuracy);
  const auto lr = eigenvalue_radial(accuracy);
  double margin = lt[0];
  for (double v : lt) margin = std::min(margin, v);
  for (double v : lr) margin = std::min(margin, v);
  return margin;
}

double RadialKahlerPotential::phi_derivative_t(double t, int k) const {
  return phi_.derivative_at_t(t, k);
}

double RadialKahlerPotential::transverse_eigenvalue_at(double t) const {
  return phi_.derivative_at_t(t, 1);
}

double RadialKahlerPotential::radial_eigenvalue_at(double t) const {
  if (radial_eig_) return radial_eig_(t, 0);
  return phi_.derivative_at_t(t, 1) + t * phi_.derivative_at_t(t, 2);
}

double RadialKahlerPotential::density_at(double t) const {
  return std::pow(transverse_eigenvalue_at(t), m_ - 1) *
         radial_eigenvalue_at(t);
}

double RadialKahlerPotential::log_density_at(double t) const {
  return (m_ - 1) * std::log(transverse_eigenvalue_at(t)) +
         std::log(radial_eigenvalue_at(t));
}

RadialFunction RadialKahlerPotential::deviation_from_flat() const {
  const auto& g = phi_.grid();
  std::vector<double> vals(g.size());
  for (int i = 0; i < g.size(); ++i) vals[i] = phi_.value(i) - g.t(i);
  return RadialFunction::sampled(g, std::move(vals));
}

}  // namespace ale
