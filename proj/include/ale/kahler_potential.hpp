#pragma once

#include <vector>

#include "ale/radial_function.hpp"

namespace ale {

// U(m)-invariant Kahler potential Phi(t), t = r^2. In the normalization used
// throughout, the induced metric has eigenvalue Phi'(t) with multiplicity
// m-1 (transverse) and Phi' + t Phi'' with multiplicity 1 (radial), and
// Phi = t is the Euclidean metric. The class constant c = lim_{t->0}
// t^m (Phi')^m measures the size of the exceptional set; c = 0 is the flat
// cone, c > 0 a resolved one.
class RadialKahlerPotential {
 public:
  // radial_eigenvalue optionally supplies Phi' + t Phi'' in closed form
  // (value only); the generic sum of the two derivative terms cancels to
  // t^{m-1} size near the origin, so exact constructions should pass the
  // grouped expression
  RadialKahlerPotential(int m, RadialFunction phi, double class_constant,
                        RadialEvaluator radial_eigenvalue = nullptr);

  static RadialKahlerPotential flat(const RadialGrid& g, int m);

  int complex_dimension() const { return m_; }
  const RadialFunction& potential() const { return phi_; }
  double class_constant() const { return class_constant_; }

  std::vector<double> eigenvalue_transverse(int accuracy = 4) const;  // Phi'
  std::vector<double> eigenvalue_radial(int accuracy = 4) const;  // Phi'+tPhi''
  // (Phi')^{m-1} (Phi' + t Phi''), the volume density against the flat metric
  std::vector<double> density(int accuracy = 4) const;
  double positivity_margin(int accuracy = 4) const;

  // analytic access (closed-form potentials only)
  double phi_derivative_t(double t, int k) const;
  double transverse_eigenvalue_at(double t) const;  // Phi'
  double radial_eigenvalue_at(double t) const;      // Phi' + t Phi''
  double density_at(double t) const;
  double log_density_at(double t) const;
  bool has_exact_radial_eigenvalue() const { return bool(radial_eig_); }

  RadialFunction deviation_from_flat() const;  // Phi - t

 private:
  int m_;
  RadialFunction phi_;
  double class_constant_;
  RadialEvaluator radial_eig_;
};

}  // namespace ale
