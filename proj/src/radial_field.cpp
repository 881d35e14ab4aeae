#include "ale/radial_field.hpp"

#include <cmath>
#include <stdexcept>

#include "ale/quadrature.hpp"

namespace ale {

RadialFunction smoothed_radius(const RadialGrid& g) {
  auto ev = [](double r, int k) -> double {
    const double rho = std::hypot(1.0, r);
    switch (k) {
      case 0:
        return rho;
      case 1:
        return r / rho;
      case 2:
        return 1.0 / (rho * rho * rho);
      case 3:
        return -3.0 * r / std::pow(rho, 5);
      case 4:
        return -3.0 / std::pow(rho, 5) + 15.0 * r * r / std::pow(rho, 7);
      default:
        throw std::invalid_argument("smoothed_radius: order 0..4");
    }
  };
  return RadialFunction::closed_form(g, ev, RadialVariable::Radius, 4);
}

WeightedNormReport weighted_ck_norm(const RadialFunction& f,
                                    const RadialFunction& rho, double beta,
                                    int k, double alpha) {
  if (k < 0 || k > 4)
    throw std::invalid_argument("weighted_ck_norm: derivative order 0..4");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("weighted_ck_norm: alpha in (0,1)");
  if (!f.grid().same_nodes(rho.grid()))
    throw std::invalid_argument("weighted_ck_norm: f and rho on one grid");

  const auto& g = f.grid();
  const int n = g.size();

  WeightedNormReport rep;
  rep.beta = beta;
  rep.k = k;
  rep.alpha = alpha;
  rep.per_order_sups.resize(k + 1, 0.0);

  std::vector<double> top;  // k-th derivative, reused for the seminorm
  for (int j = 0; j <= k; ++j) {
    const std::vector<double> dj = f.derivative_r(j);
    double sup = 0.0;
    int arg = 0;
    for (int i = 0; i < n; ++i) {
      const double w = std::pow(rho.value(i), j - beta) * std::abs(dj[i]);
      if (w > sup) {
        sup = w;
        arg = i;
      }
    }
    rep.per_order_sups[j] = sup;
    rep.ck_norm += sup;
    if (sup > 0.0 && arg == n - 1) rep.boundary_dominated = true;
    if (j == k) top = dj;
  }

  // Holder seminorm of the top derivative over node pairs with
  // d < min(rho)/2, weight min(rho)^{k+alpha-beta}
  const double gamma = beta - k - alpha;
  double semi = 0.0;
  for (int i = 0; i < n; ++i) {
    const double ri = g.r(i);
    const double rho_i = rho.value(i);
    for (int j = i + 1; j < n; ++j) {
      const double d = g.r(j) - ri;
      if (d >= 0.5 * rho_i) break;  // min(rho_i, rho_j) <= rho_i
      const double mn = std::min(rho_i, rho.value(j));
      if (d >= 0.5 * mn) continue;
      const double q = std::pow(mn, -gamma) * std::abs(top[i] - top[j]) /
                       std::pow(d, alpha);
      if (q > semi) semi = q;
    }
  }
  rep.holder_seminorm = semi;
  return rep;
}

double decay_order(const RadialFunction& f, int k, double r_lo, double r_hi) {
  if (!(r_lo > 0.0) || !(r_hi > r_lo))
    throw std::invalid_argument("decay_order: bad window");
  const auto& g = f.grid();
  if (r_lo < g.r_min() * (1 - 1e-9) || r_hi > g.r_max() * (1 + 1e-9))
    throw std::invalid_argument("decay_order: window outside grid");
  const std::vector<double> dk = f.derivative_r(k);
  return log_log_slope(g.radii(), dk, r_lo, r_hi);
}

}  // namespace ale
