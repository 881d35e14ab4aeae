#pragma once

#include <string>
#include <vector>

#include "ale/kahler_potential.hpp"
#include "ale/radial_function.hpp"

namespace ale {

// Radial complex Monge-Ampere problem: find phi with
//   (Phi')^{m-1} (Phi' + t Phi'') = e^f (u')^{m-1} (u' + t u''),
// Phi = u + phi, against the background potential u. beta is the decay
// weight of f in the radius r.
struct MAProblem {
  int m = 2;
  RadialKahlerPotential background;
  RadialFunction f;
  double beta = -5.0;
  int group_order = 1;
};

struct MASolverOptions {
  double newton_tol = 1e-11;
  int max_newton = 60;
  // Richardson levels over nested grids (1 = base grid only). Levels above 1
  // need a closed-form background.
  int refinement_levels = 3;
};

struct MASolution {
  RadialFunction phi;
  double A = 0.0;            // fitted coefficient of rho^{2-2m}, rho^2 = 1+t
  RadialFunction psi;        // phi - A rho^{2-2m}
  std::string case_tag;      // "a": beta in (-2m,-2); "b": beta < -2m
  int newton_iterations = 0;
  double final_residual = 0.0;
  double positivity_margin = 0.0;
  // metric eigenvalues of the solved potential at the nodes
  std::vector<double> lambda_transverse;
  std::vector<double> lambda_radial;
  // sup-norm residual history of the first Newton run on the base grid
  std::vector<double> residual_history;
  double measured_decay_psi = 0.0;
};

// Pointwise volume ratio of u + phi against u. Throws (naming the first bad
// node) if u + phi is not positive.
RadialFunction ma_ratio(const RadialKahlerPotential& background,
                        const RadialFunction& phi, int accuracy = 4);

// Glue the potential to the flat one across the annulus R-1 < sqrt(t) < R:
//   u_hat = t + mu(sqrt(t) - R) (u0 - t),
// identical to u0 inside, exactly t outside. Requires R > 2; throws if the
// glued form loses positivity (take R larger).
RadialKahlerPotential flatten(const RadialKahlerPotential& u0, double R);

// f = -log of the volume density; (1/2) d d^c f is the Ricci form of the
// metric of u, and f vanishes exactly where u = t.
RadialFunction ricci_potential(const RadialKahlerPotential& u,
                               int accuracy = 4);

// Exact integration: d/dt [ t^m (Phi')^m ] = m t^{m-1} e^f (density of u),
// so t^m (Phi')^m = c + int_0^t, then one more integration with Phi - t -> 0
// at infinity. c >= 0 prescribes the class constant of the solution.
MASolution solve_ma_quadrature(const MAProblem& p, double class_constant);

// Continuity method: march e^{s f} over `steps` increments, solving each by
// damped Newton on the log-density residual. The linearized operator is
// tridiagonal (second order in x = log t); the inner boundary fixes the
// class constant, the outer imposes d/dt (t^{m-1} phi) -> 0.
MASolution solve_ma_continuity(const MAProblem& p, double class_constant,
                               int steps, const MASolverOptions& opts = {});

struct MALeadingCoefficient {
  // |G| / ((m-1) Omega_{2m-1}) * int (1 - e^f) dV of the background metric.
  // In the flat-potential normalization used here this integral equals half
  // of the fitted t^{1-m} coefficient; callers cross-check
  // fitted = 2 * formula.
  double formula = 0.0;
  double fitted = 0.0;
};

MALeadingCoefficient leading_coefficient_ma(const MAProblem& p,
                                            const MASolution& solution);

}  // namespace ale
