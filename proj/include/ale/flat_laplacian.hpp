#pragma once

#include <string>
#include <utility>

#include "ale/radial_function.hpp"

namespace ale {

// Poisson problem on R^n / G restricted to radial data. beta is the decay
// weight of the right-hand side: |f| <~ r^beta at infinity. The sign
// convention is the geometer one, Delta u = -(u'' + (n-1) u'/r), so the
// solution operator has a positive kernel.
struct PoissonProblem {
  int n = 4;
  int group_order = 1;
  RadialFunction f;
  double beta = -3.0;
};

struct PoissonSolution {
  RadialFunction u;
  double A = 0.0;             // coefficient of the harmonic tail r^{2-n}
  RadialFunction v;           // u - A r^{2-n}
  std::string case_tag;       // "a": beta in (-n,-2); "b": beta < -n
  double measured_decay_u = 0.0;
  double measured_decay_v = 0.0;
  double residual_sup = 0.0;  // max |Delta u - f| at interior nodes
};

// Delta u = -(u'' + (n-1) u'/r) on the nodes of u.
RadialFunction laplacian(const RadialFunction& u, int n, int accuracy = 4);

// Green-quadrature solve of Delta u = f with u -> 0 at infinity:
//   u(r) = int_r^inf s^{1-n} ( int_0^s f(q) q^{n-1} dq ) ds.
// Requires beta < -2 and f bounded near 0.
PoissonSolution solve_poisson(const PoissonProblem& p);

// Independent route: tridiagonal boundary-value discretization in x = log r
// with Richardson extrapolation. sigma_out is the imposed decay exponent at
// the outer boundary (defaults to the case-appropriate one).
RadialFunction solve_poisson_fd(const PoissonProblem& p,
                                int refinement_levels = 2,
                                double sigma_out_override = 0.0,
                                bool has_override = false);

// A = |G| / ((n-2) Omega_{n-1}) * int f dV; the sphere area and group order
// cancel against the radial measure but both are kept explicit.
double leading_coefficient(const PoissonProblem& p);

// Integral of Delta(rho^{2-n}) over R^n/G for rho = sqrt(1+r^2), returned
// together with its closed-form value (n-2) Omega_{n-1} / |G|.
std::pair<double, double> delta_radius_identity(int n, int group_order,
                                                const RadialGrid& g);

struct SymmetryCheck {
  double residual = 0.0;       // | int (u Delta v - v Delta u) r^{n-1} dr |
  double boundary_term = 0.0;  // r^{n-1} (u v' - v u') at the outer node
};

// Verifies int u Delta v = int v Delta u. Requires beta + gamma < 2 - n,
// the weight range in which the boundary flux vanishes at infinity.
SymmetryCheck symmetry_residual(const RadialFunction& u,
                                const RadialFunction& v, int n, double beta,
                                double gamma);

}  // namespace ale
