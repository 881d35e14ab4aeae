#pragma once

#include <string>
#include <vector>

#include "ale/radial_function.hpp"

namespace ale {

// Named closed-form right-hand sides shared by the CLI and tests.
//   inverse_quadratic_power  (1 + r^2)^{-p/2}, decays like r^{-p}
//   harmonic_radius_laplacian  n(n-2) (1+r^2)^{-(n+2)/2}  (param = n);
//       this is Delta applied to (1+r^2)^{(2-n)/2}
//   compact_bump  exp(1 - 1/(1 - (r/R)^2)) for r < R, else 0  (param = R)
//   zero_mean_quartic  (2 - r^2) exp(-r^2); integrates to zero against
//       r^3 dr (dimension-4 volume weight)
RadialFunction make_registry_function(const std::string& name, double param,
                                      const RadialGrid& g);

bool registry_has(const std::string& name);
std::vector<std::string> registry_names();

// nominal decay weight of a registry entry (used to fill problem weights)
double registry_decay_weight(const std::string& name, double param);

}  // namespace ale
