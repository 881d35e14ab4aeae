#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "ale/radial_grid.hpp"

namespace ale {

// Variable a closed-form evaluator is differentiated in.
enum class RadialVariable { Radius, SquaredRadius };

// d^k f / d(arg)^k for a closed-form profile; order 0 is the value.
using RadialEvaluator = std::function<double(double arg, int order)>;

// A function of the radius sampled on a log grid. Closed-form sources carry
// an evaluator so derivatives can be taken analytically; sampled sources
// fall back to finite differences in the log coordinate.
class RadialFunction {
 public:
  RadialFunction() = default;

  static RadialFunction sampled(RadialGrid grid, std::vector<double> values);
  static RadialFunction closed_form(RadialGrid grid, RadialEvaluator f,
                                    RadialVariable var, int max_order);

  bool valid() const { return !values_.empty(); }
  bool is_closed_form() const { return analytic_order_ >= 0; }
  int analytic_order() const { return analytic_order_; }
  const RadialGrid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double value(int i) const { return values_[i]; }

  // node derivatives with respect to the geometric radius r / to t = r^2
  std::vector<double> derivative_r(int k, int accuracy = 4) const;
  std::vector<double> derivative_t(int k, int accuracy = 4) const;

  // value anywhere in the grid range; sampled sources use local quartic
  // interpolation in x and clamp outside the range. Closed forms evaluate
  // in their native variable (no sqrt round trip).
  double evaluate_r(double r) const;
  double evaluate_t(double t) const;
  // derivative at an arbitrary radius; needs a closed form of enough orders
  double derivative_at_r(double r, int k) const;
  double derivative_at_t(double t, int k) const;

  RadialFunction resampled(const RadialGrid& g) const;

 private:
  RadialGrid grid_{GridCoordinate::LogRadius, 1.0, 10.0, 16};
  std::vector<double> values_;
  RadialEvaluator analytic_;
  RadialVariable analytic_var_ = RadialVariable::Radius;
  int analytic_order_ = -1;
};

// Chain rule for g = f o inner through order 4:
// fd[j] = f^(j)(inner(y)), ind[j] = inner^(j)(y), out[j] = g^(j)(y).
void compose_derivatives(const double* fd, const double* ind, double* out,
                         int max_order);

// d^k/dr^k from t-derivatives at t = r^2 and the reverse, k <= 4
double radius_derivative_from_t(const double* dt, double r, int k);
double t_derivative_from_radius(const double* dr, double r, int k);

// d^k/dr^k of (1 + r^2)^q, k <= 4
double inv_quadratic_power_derivative(double q, double r, int k);

}  // namespace ale
