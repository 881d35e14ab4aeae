#pragma once

#include <utility>

#include "ale/kahler_potential.hpp"
#include "ale/radial_grid.hpp"

namespace ale {

// The explicit U(m)-invariant Ricci-flat ALE potential on the resolution of
// C^m/Z_m, as a function of t = r^2 with s = (t^m + 1)^{1/m}:
//   f(t) = s + (1/m) sum_{j=0}^{m-1} zeta^j log(s - zeta^j),
// zeta = exp(2 pi i / m), principal logarithms. The metric eigenvalues are
// Phi' = s/t and Phi' + t Phi'' = (t/s)^{m-1}, so the volume density is
// identically 1; the class constant is 1.

double calabi_potential(int m, double t);

// f(t) - t, evaluated without cancellation (usable out to t ~ 1e12)
double calabi_deviation(int m, double t);

// imaginary residue of the complex log sum; a self-check that f is real
double calabi_imaginary_residue(int m, double t);

// (Phi', Phi' + t Phi'') in closed form
std::pair<double, double> calabi_derivatives(int m, double t);

// d^k f / dt^k for k = 0..4
double calabi_derivative(int m, double t, int k);

// Phi' - 1 and the asymptotic remainder
//   chi(t) = f(t) - t + t^{1-m} / (m (m-1)),
// both cancellation-safe; k = 0..2 derivatives in t
double calabi_metric_deviation(int m, double t, int k);
double calabi_remainder_chi(int m, double t, int k);

RadialKahlerPotential calabi_metric(int m, const RadialGrid& g);

// max over nodes of |(Phi')^{m-1}(Phi' + t Phi'') - 1| with closed forms
double ricci_flat_residual(int m, const RadialGrid& g);
// same from finite differences of the sampled potential; evaluated at nodes
// with full central stencil support (one-sided closures are excluded)
double ricci_flat_residual_fd(int m, const RadialGrid& g, int accuracy = 6);

// Coefficient of t^{1-m} in f(t) - t, from a least-squares fit on the basis
// {1, t^{1-m}, t^{-m}} over [t_lo, t_hi]. Exact value is -1/(m(m-1)).
double asymptotic_coefficient(int m, double t_lo, double t_hi);

// Decay exponent (in r) of d^k/dr^k (Phi' - 1); exact value is -2m - k.
double metric_decay_profile(int m, int k);

}  // namespace ale
