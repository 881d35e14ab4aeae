#include "ale/finite_difference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ale {

// Fornberg's recursion (Math. Comp. 51, 1988).
std::vector<double> fd_weights(double x0, std::span<const double> nodes,
                               int order) {
  const int n = static_cast<int>(nodes.size());
  if (order < 0 || n < order + 1)
    throw std::invalid_argument("fd_weights: not enough nodes");
  std::vector<double> c(static_cast<std::size_t>(n) * (order + 1), 0.0);
  auto at = [&](int i, int j) -> double& { return c[i * (order + 1) + j]; };

  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  at(0, 0) = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          at(i, k) = c1 * (k * at(i - 1, k - 1) - c5 * at(i - 1, k)) / c2;
        at(i, 0) = -c1 * c5 * at(i - 1, 0) / c2;
      }
      for (int k = mn; k >= 1; --k)
        at(j, k) = (c4 * at(j, k) - k * at(j, k - 1)) / c3;
      at(j, 0) = c4 * at(j, 0) / c3;
    }
    c1 = c2;
  }

  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = at(i, order);
  return w;
}

namespace {

// window width giving the requested accuracy for central stencils
int stencil_width(int order, int accuracy) {
  if (order < 1 || order > 4)
    throw std::invalid_argument("fd_derivative_uniform: order must be 1..4");
  if (accuracy != 4 && accuracy != 6)
    throw std::invalid_argument("fd_derivative_uniform: accuracy 4 or 6");
  int w = order + accuracy - 1;
  if (w % 2 == 0) ++w;
  return w;
}

}  // namespace

std::vector<double> fd_derivative_uniform(std::span<const double> values,
                                          double h, int order, int accuracy) {
  const int n = static_cast<int>(values.size());
  const int w = stencil_width(order, accuracy);
  if (n < w)
    throw std::invalid_argument("fd_derivative_uniform: too few samples");

  // offsets in index units; weights scale by h^{-order}
  std::vector<double> offs(w);
  const double scale = std::pow(h, -order);

  // interior weights computed once
  for (int j = 0; j < w; ++j) offs[j] = j - w / 2;
  const std::vector<double> interior = fd_weights(0.0, offs, order);

  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    int start = std::clamp(i - w / 2, 0, n - w);
    std::vector<double> wts;
    const std::vector<double>* use = &interior;
    if (start != i - w / 2) {
      for (int j = 0; j < w; ++j) offs[j] = start + j - i;
      wts = fd_weights(0.0, offs, order);
      use = &wts;
    }
    double acc = 0.0;
    for (int j = 0; j < w; ++j) acc += (*use)[j] * values[start + j];
    out[i] = acc * scale;
  }
  return out;
}

}  // namespace ale
