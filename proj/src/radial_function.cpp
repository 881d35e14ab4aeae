#include "ale/radial_function.hpp"

#include <cmath>
#include <stdexcept>

#include "ale/finite_difference.hpp"

namespace ale {

namespace {

// signed Stirling numbers of the first kind: (d/dy)^k = y^{-k} sum_j s(k,j)
// (d/d log y)^j, rows k = 1..4
constexpr double kStirling[5][5] = {
    {0, 0, 0, 0, 0},
    {0, 1, 0, 0, 0},
    {0, -1, 1, 0, 0},
    {0, 2, -3, 1, 0},
    {0, -6, 11, -6, 1},
};

}  // namespace

void compose_derivatives(const double* fd, const double* ind, double* out,
                         int max_order) {
  // Faa di Bruno through order 4 for g = f o inner
  out[0] = fd[0];
  if (max_order >= 1) out[1] = fd[1] * ind[1];
  if (max_order >= 2) out[2] = fd[2] * ind[1] * ind[1] + fd[1] * ind[2];
  if (max_order >= 3)
    out[3] = fd[3] * ind[1] * ind[1] * ind[1] +
             3.0 * fd[2] * ind[1] * ind[2] + fd[1] * ind[3];
  if (max_order >= 4)
    out[4] = fd[4] * ind[1] * ind[1] * ind[1] * ind[1] +
             6.0 * fd[3] * ind[1] * ind[1] * ind[2] +
             fd[2] * (3.0 * ind[2] * ind[2] + 4.0 * ind[1] * ind[3]) +
             fd[1] * ind[4];
}

double radius_derivative_from_t(const double* dt, double r, int k) {
  // inner map t(r) = r^2
  const double ind[5] = {r * r, 2.0 * r, 2.0, 0.0, 0.0};
  double out[5];
  compose_derivatives(dt, ind, out, k);
  return out[k];
}

double t_derivative_from_radius(const double* dr, double r, int k) {
  // inner map r(t) = sqrt(t), derivatives in t expressed through r
  const double ind[5] = {r, 0.5 / r, -0.25 / (r * r * r),
                         0.375 / (r * r * r * r * r),
                         -0.9375 / (r * r * r * r * r * r * r)};
  double out[5];
  compose_derivatives(dr, ind, out, k);
  return out[k];
}

RadialFunction RadialFunction::sampled(RadialGrid grid,
                                       std::vector<double> values) {
  if (static_cast<int>(values.size()) != grid.size())
    throw std::invalid_argument("RadialFunction: value count != grid size");
  for (double v : values)
    if (!std::isfinite(v))
      throw std::invalid_argument("RadialFunction: non-finite sample");
  RadialFunction f;
  f.grid_ = std::move(grid);
  f.values_ = std::move(values);
  return f;
}

RadialFunction RadialFunction::closed_form(RadialGrid grid, RadialEvaluator fn,
                                           RadialVariable var, int max_order) {
  if (!fn) throw std::invalid_argument("RadialFunction: null evaluator");
  if (max_order < 0 || max_order > 4)
    throw std::invalid_argument("RadialFunction: evaluator order 0..4");
  RadialFunction f;
  f.grid_ = std::move(grid);
  f.analytic_ = std::move(fn);
  f.analytic_var_ = var;
  f.analytic_order_ = max_order;
  f.values_.resize(f.grid_.size());
  for (int i = 0; i < f.grid_.size(); ++i) {
    const double arg =
        var == RadialVariable::Radius ? f.grid_.r(i) : f.grid_.t(i);
    f.values_[i] = f.analytic_(arg, 0);
    if (!std::isfinite(f.values_[i]))
      throw std::invalid_argument("RadialFunction: non-finite sample");
  }
  return f;
}

std::vector<double> RadialFunction::derivative_r(int k, int accuracy) const {
  if (k < 0 || k > 4)
    throw std::invalid_argument("derivative_r: order 0..4 supported");
  if (k == 0) return values_;

  const int n = grid_.size();
  std::vector<double> out(n);

  if (analytic_order_ >= k) {
    for (int i = 0; i < n; ++i) out[i] = derivative_at_r(grid_.r(i), k);
    return out;
  }

  // finite differences in x, then theta powers -> radius derivatives
  std::vector<std::vector<double>> dx(k + 1);
  for (int j = 1; j <= k; ++j)
    dx[j] = fd_derivative_uniform(values_, grid_.dx(), j, accuracy);
  const double c =
      grid_.coordinate() == GridCoordinate::LogRadius ? 1.0 : 2.0;
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    double cj = 1.0;
    for (int j = 1; j <= k; ++j) {
      cj *= c;
      acc += kStirling[k][j] * cj * dx[j][i];
    }
    out[i] = acc / std::pow(grid_.r(i), k);
  }
  return out;
}

std::vector<double> RadialFunction::derivative_t(int k, int accuracy) const {
  if (k < 0 || k > 4)
    throw std::invalid_argument("derivative_t: order 0..4 supported");
  if (k == 0) return values_;

  const int n = grid_.size();
  std::vector<double> out(n);

  if (analytic_order_ >= k) {
    for (int i = 0; i < n; ++i) out[i] = derivative_at_t(grid_.t(i), k);
    return out;
  }

  std::vector<std::vector<double>> dx(k + 1);
  for (int j = 1; j <= k; ++j)
    dx[j] = fd_derivative_uniform(values_, grid_.dx(), j, accuracy);
  const double c =
      grid_.coordinate() == GridCoordinate::LogSquaredRadius ? 1.0 : 0.5;
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    double cj = 1.0;
    for (int j = 1; j <= k; ++j) {
      cj *= c;
      acc += kStirling[k][j] * cj * dx[j][i];
    }
    out[i] = acc / std::pow(grid_.t(i), k);
  }
  return out;
}

double RadialFunction::evaluate_t(double t) const {
  if (analytic_order_ >= 0 &&
      analytic_var_ == RadialVariable::SquaredRadius)
    return analytic_(t, 0);
  return evaluate_r(std::sqrt(t));
}

double RadialFunction::evaluate_r(double r) const {
  if (analytic_order_ >= 0) {
    const double arg = analytic_var_ == RadialVariable::Radius ? r : r * r;
    return analytic_(arg, 0);
  }
  // local quartic interpolation in x
  const int n = grid_.size();
  if (r <= grid_.r_min()) return values_.front();
  if (r >= grid_.r_max()) return values_.back();
  const double x = grid_.coordinate() == GridCoordinate::LogRadius
                       ? std::log(r)
                       : 2.0 * std::log(r);
  int i = grid_.nearest_index_r(r);
  int start = i - 2;
  if (start < 0) start = 0;
  if (start > n - 5) start = n - 5;
  double acc = 0.0;
  for (int a = 0; a < 5; ++a) {
    double l = 1.0;
    for (int b = 0; b < 5; ++b) {
      if (a == b) continue;
      l *= (x - grid_.x(start + b)) / (grid_.x(start + a) - grid_.x(start + b));
    }
    acc += l * values_[start + a];
  }
  return acc;
}

double RadialFunction::derivative_at_r(double r, int k) const {
  if (k == 0) return evaluate_r(r);
  if (analytic_order_ < k)
    throw std::invalid_argument(
        "derivative_at_r: needs a closed form of enough orders");
  if (analytic_var_ == RadialVariable::Radius) return analytic_(r, k);
  double dt[5] = {0, 0, 0, 0, 0};
  for (int j = 0; j <= k; ++j) dt[j] = analytic_(r * r, j);
  return radius_derivative_from_t(dt, r, k);
}

double RadialFunction::derivative_at_t(double t, int k) const {
  if (k == 0) return evaluate_t(t);
  if (analytic_order_ < k)
    throw std::invalid_argument(
        "derivative_at_t: needs a closed form of enough orders");
  if (analytic_var_ == RadialVariable::SquaredRadius) return analytic_(t, k);
  const double r = std::sqrt(t);
  double dr[5] = {0, 0, 0, 0, 0};
  for (int j = 0; j <= k; ++j) dr[j] = analytic_(r, j);
  return t_derivative_from_radius(dr, r, k);
}

double inv_quadratic_power_derivative(double q, double r, int k) {
  if (k < 0 || k > 4)
    throw std::invalid_argument("inv_quadratic_power_derivative: k 0..4");
  // derivatives of w^q with w = 1 + r^2 via the composition rule
  const double w = 1.0 + r * r;
  double fw[5] = {std::pow(w, q), 0, 0, 0, 0};
  double fac = 1.0;
  for (int j = 1; j <= k; ++j) {
    fac *= (q - (j - 1));
    fw[j] = fac * std::pow(w, q - j);
  }
  const double ind[5] = {w, 2.0 * r, 2.0, 0.0, 0.0};
  double out[5];
  compose_derivatives(fw, ind, out, k);
  return out[k];
}

RadialFunction RadialFunction::resampled(const RadialGrid& g) const {
  if (analytic_order_ >= 0)
    return closed_form(g, analytic_, analytic_var_, analytic_order_);
  std::vector<double> vals(g.size());
  for (int i = 0; i < g.size(); ++i) vals[i] = evaluate_r(g.r(i));
  return sampled(g, std::move(vals));
}

}  // namespace ale
