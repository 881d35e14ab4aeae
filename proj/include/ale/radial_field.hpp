#pragma once

#include <vector>

#include "ale/radial_function.hpp"

namespace ale {

// Weighted C^k norm of a profile against a radius function rho:
// per_order_sups[j] = sup rho^{j-beta} |f^(j)|, summed into ck_norm, plus
// the weighted Holder seminorm of the top derivative.
struct WeightedNormReport {
  double beta = 0.0;
  int k = 0;
  double alpha = 0.5;
  double ck_norm = 0.0;
  double holder_seminorm = 0.0;
  std::vector<double> per_order_sups;
  // a sup was attained at the outermost node: the norm is probably not
  // converged on this grid (the weight does not control the tail)
  bool boundary_dominated = false;
};

// rho(r) = sqrt(1 + r^2): smooth, >= 1, equal to r up to O(1/r) at infinity.
RadialFunction smoothed_radius(const RadialGrid& g);

// Derivatives are taken with respect to the geometric radius. Pairs entering
// the Holder seminorm are grid nodes with d(x,y) < min(rho(x), rho(y))/2,
// weighted by min(rho)^{k+alpha-beta}.
WeightedNormReport weighted_ck_norm(const RadialFunction& f,
                                    const RadialFunction& rho, double beta,
                                    int k, double alpha = 0.5);

// Least-squares slope of log|f^(k)| against log r over the window; the
// power-law exponent of the k-th derivative.
double decay_order(const RadialFunction& f, int k, double r_lo, double r_hi);

}  // namespace ale
