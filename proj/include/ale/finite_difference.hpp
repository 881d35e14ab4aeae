#pragma once

#include <span>
#include <vector>

namespace ale {

// Fornberg weights for d^m/dx^m at x0 from arbitrary distinct nodes.
std::vector<double> fd_weights(double x0, std::span<const double> nodes,
                               int order);

// k-th derivative of uniformly sampled values (spacing h). Central stencils
// of the requested accuracy (4 or 6) in the interior, windows slide
// one-sided at the ends.
std::vector<double> fd_derivative_uniform(std::span<const double> values,
                                          double h, int order,
                                          int accuracy = 4);

}  // namespace ale
