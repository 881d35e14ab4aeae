#include "ale/function_registry.hpp"

#include <cmath>
#include <stdexcept>

namespace ale {

namespace {

// derivatives of P(r) exp(-r^2): the polynomial obeys Q = P' - 2 r P
struct Poly {
  // coefficients by power of r
  std::vector<double> c;
  double eval(double r) const {
    double acc = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * r + c[i];
    return acc;
  }
  Poly derive_minus_2r() const {
    Poly q;
    q.c.assign(c.size() + 1, 0.0);
    for (std::size_t i = 1; i < c.size(); ++i) q.c[i - 1] += i * c[i];
    for (std::size_t i = 0; i < c.size(); ++i) q.c[i + 1] -= 2.0 * c[i];
    return q;
  }
};

}  // namespace

RadialFunction make_registry_function(const std::string& name, double param,
                                      const RadialGrid& g) {
  if (name == "inverse_quadratic_power") {
    if (!(param > 0.0))
      throw std::invalid_argument("inverse_quadratic_power: p > 0");
    const double q = -0.5 * param;
    auto ev = [q](double r, int k) {
      return inv_quadratic_power_derivative(q, r, k);
    };
    return RadialFunction::closed_form(g, ev, RadialVariable::Radius, 4);
  }
  if (name == "harmonic_radius_laplacian") {
    const int n = static_cast<int>(param);
    if (n <= 2 || param != n)
      throw std::invalid_argument("harmonic_radius_laplacian: integer n > 2");
    const double c = static_cast<double>(n) * (n - 2);
    const double q = -0.5 * (n + 2);
    auto ev = [c, q](double r, int k) {
      return c * inv_quadratic_power_derivative(q, r, k);
    };
    return RadialFunction::closed_form(g, ev, RadialVariable::Radius, 4);
  }
  if (name == "compact_bump") {
    if (!(param > 0.0)) throw std::invalid_argument("compact_bump: R > 0");
    const double R = param;
    auto ev = [R](double r, int k) -> double {
      if (k != 0)
        throw std::invalid_argument("compact_bump: values only");
      const double u = r / R;
      if (u >= 1.0) return 0.0;
      return std::exp(1.0 - 1.0 / (1.0 - u * u));
    };
    return RadialFunction::closed_form(g, ev, RadialVariable::Radius, 0);
  }
  if (name == "zero_mean_quartic") {
    // (2 - r^2) e^{-r^2}: total mass against r^3 dr vanishes
    Poly p0;
    p0.c = {2.0, 0.0, -1.0};
    std::vector<Poly> polys{p0};
    for (int k = 1; k <= 4; ++k)
      polys.push_back(polys.back().derive_minus_2r());
    auto ev = [polys](double r, int k) {
      return polys[k].eval(r) * std::exp(-r * r);
    };
    return RadialFunction::closed_form(g, ev, RadialVariable::Radius, 4);
  }
  throw std::invalid_argument("unknown registry function: " + name);
}

bool registry_has(const std::string& name) {
  return name == "inverse_quadratic_power" ||
         name == "harmonic_radius_laplacian" || name == "compact_bump" ||
         name == "zero_mean_quartic";
}

std::vector<std::string> registry_names() {
  return {"inverse_quadratic_power", "harmonic_radius_laplacian",
          "compact_bump", "zero_mean_quartic"};
}

double registry_decay_weight(const std::string& name, double param) {
  if (name == "inverse_quadratic_power") return -param;
  if (name == "harmonic_radius_laplacian") return -(param + 2.0);
  if (name == "compact_bump") return -40.0;    // compactly supported
  if (name == "zero_mean_quartic") return -40.0;  // super-polynomial decay
  throw std::invalid_argument("unknown registry function: " + name);
}

}  // namespace ale
