#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ale/radial_grid.hpp"

namespace ale {

// Area of the unit sphere S^{n-1} in R^n, e.g. n=4 gives 2 pi^2.
double sphere_area(int n);

// Single 8-point Gauss-Legendre pass; for short smooth segments.
double gauss_segment(const std::function<double(double)>& f, double a,
                     double b);

// Adaptive Gauss-Legendre (8 point, bisected) on [a, b]. The subdivision
// stops at rel_tol relative to the local value or at an absolute floor,
// whichever is larger; abs_tol lets callers name the scale below which the
// integrand is numerical noise.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-13, int max_depth = 24,
                 double abs_tol = 0.0);

// Cumulative integrals of f(r) from the first node: out[i] = int_{r_0}^{r_i}.
std::vector<double> cumulative_r(const RadialGrid& g,
                                 const std::function<double(double)>& f,
                                 double rel_tol = 1e-13);

// Least-squares slope of log|y| against log x over [x_lo, x_hi]; nodes with
// |y| below the floor are skipped. Throws if fewer than 8 nodes survive.
double log_log_slope(std::span<const double> xs, std::span<const double> ys,
                     double x_lo, double x_hi, double floor = 1e-280);

// int_{x_end}^inf of a power-law extension f_end (x/x_end)^slope, slope < -1.
double power_law_tail(double f_end, double slope, double x_end);

// Tail slope of sampled values near the outer end of a grid (last quarter
// decade in r). Returns 0 and sets *negligible when the tail is numerically
// zero relative to the given scale.
double measured_tail_slope(const RadialGrid& g, std::span<const double> vals,
                           double scale, bool* negligible);

// Least-squares fit of y against the power basis {x^p : p in powers};
// columns are normalized before solving. Returns the coefficients.
std::vector<double> fit_power_basis(std::span<const double> x,
                                    std::span<const double> y,
                                    std::span<const double> powers);

}  // namespace ale
