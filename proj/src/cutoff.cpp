#include "ale/cutoff.hpp"

#include <cmath>
#include <stdexcept>

namespace ale {

namespace {

// b(u) = exp(-1/u) for u > 0, identically 0 otherwise; derivatives are
// exp(-1/u) p_k(1/u).
double bump(double u, int k) {
  if (u <= 0.0) return 0.0;
  const double e = std::exp(-1.0 / u);
  const double y = 1.0 / u;
  switch (k) {
    case 0:
      return e;
    case 1:
      return e * y * y;
    case 2:
      return e * (y * y * y * y - 2.0 * y * y * y);
    case 3:
      return e * (std::pow(y, 6) - 6.0 * std::pow(y, 5) + 6.0 * y * y * y * y);
    case 4:
      return e * (std::pow(y, 8) - 12.0 * std::pow(y, 7) +
                  36.0 * std::pow(y, 6) - 24.0 * std::pow(y, 5));
    default:
      throw std::invalid_argument("cutoff: derivative order 0..4");
  }
}

constexpr double kBinom[5][5] = {{1, 0, 0, 0, 0},
                                 {1, 1, 0, 0, 0},
                                 {1, 2, 1, 0, 0},
                                 {1, 3, 3, 1, 0},
                                 {1, 4, 6, 4, 1}};

// T(u) = b(u) / (b(u) + b(1-u)) on (0,1); derivatives by solving the
// Leibniz relation N^(k) = sum C(k,j) T^(j) D^(k-j) for T^(k).
void transition(double u, int kmax, double* out) {
  double nb[5], db[5];
  for (int j = 0; j <= kmax; ++j) {
    nb[j] = bump(u, j);
    const double sgn = (j % 2 == 0) ? 1.0 : -1.0;
    db[j] = nb[j] + sgn * bump(1.0 - u, j);
  }
  for (int k = 0; k <= kmax; ++k) {
    double s = nb[k];
    for (int j = 0; j < k; ++j) s -= kBinom[k][j] * out[j] * db[k - j];
    out[k] = s / db[0];
  }
}

}  // namespace

double CutoffFunction::derivative(double s, int k) const {
  if (k < 0 || k > 4)
    throw std::invalid_argument("cutoff: derivative order 0..4");
  const double w = s - shift_;
  if (w <= -1.0) return k == 0 ? 1.0 : 0.0;
  if (w >= 0.0) return 0.0;
  // value 1 at w = -1, 0 at w = 0: mu(w) = T(-w), chain factor (-1)^k
  double t[5];
  transition(-w, k, t);
  return (k % 2 == 0) ? t[k] : -t[k];
}

}  // namespace ale
