#include "ale/monge_ampere.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "ale/cutoff.hpp"
#include "ale/finite_difference.hpp"
#include "ale/quadrature.hpp"
#include "ale/radial_field.hpp"
#include "ale/tridiagonal.hpp"

namespace ale {

namespace {

void validate_ma(const MAProblem& p) {
  if (p.m < 2) throw std::invalid_argument("MAProblem: m >= 2");
  if (p.m != p.background.complex_dimension())
    throw std::invalid_argument("MAProblem: dimension mismatch");
  if (p.group_order < 1)
    throw std::invalid_argument("MAProblem: group order >= 1");
  if (!(p.beta < -2.0)) throw std::invalid_argument("MAProblem: beta < -2");
  if (!p.f.valid()) throw std::invalid_argument("MAProblem: missing f");
  double sup = 0.0;
  for (double v : p.f.values()) sup = std::max(sup, std::abs(v));
  if (sup > 5.0)
    throw std::invalid_argument(
        "MAProblem: f amplitude outside the perturbative regime (sup|f| > 5)");
}

// log of the background volume density as a callable in t
std::function<double(double)> log_density_fn(const RadialKahlerPotential& u) {
  if (u.potential().analytic_order() >= 2)
    return [u](double t) { return u.log_density_at(t); };
  const auto dens = u.density();
  std::vector<double> logs(dens.size());
  for (std::size_t i = 0; i < dens.size(); ++i) logs[i] = std::log(dens[i]);
  const RadialFunction prof =
      RadialFunction::sampled(u.potential().grid(), std::move(logs));
  return [prof](double t) { return prof.evaluate_t(t); };
}

double fit_leading_A(const RadialFunction& phi, int m) {
  const auto& g = phi.grid();
  const double t_hi = g.t_max();
  const double t_lo = std::max(g.t_min() * 10.0, t_hi * 1e-4);
  std::vector<double> ts, ys;
  for (int i = 0; i < g.size(); ++i) {
    if (g.t(i) < t_lo) continue;
    ts.push_back(g.t(i));
    ys.push_back(phi.value(i));
  }
  const double powers[3] = {0.0, 1.0 - m, static_cast<double>(-m)};
  return fit_power_basis(ts, ys, powers)[1];
}

double decay_of_psi(const RadialFunction& psi) {
  // the remainder is phi minus the fitted tail term; past ~r_max/30 the
  // fit error of the coefficient dominates the remainder itself
  const auto& g = psi.grid();
  const double r_hi = g.r_max() / 30.0;
  const double r_lo = std::max(g.r_min(), g.r_max() / 100.0);
  double sup = 0.0;
  for (double v : psi.values()) sup = std::max(sup, std::abs(v));
  if (sup <= 0.0) return 0.0;
  try {
    return decay_order(psi, 0, r_lo, r_hi);
  } catch (const std::runtime_error&) {
    return 0.0;  // numerically zero remainder on the window
  }
}

}  // namespace

RadialFunction ma_ratio(const RadialKahlerPotential& background,
                        const RadialFunction& phi, int accuracy) {
  const auto& g = background.potential().grid();
  if (!g.same_nodes(phi.grid()))
    throw std::invalid_argument("ma_ratio: grids differ");
  const int m = background.complex_dimension();

  const bool analytic = background.potential().analytic_order() >= 2 &&
                        phi.analytic_order() >= 2;

  std::vector<double> lt(g.size()), lr(g.size());
  if (analytic) {
    for (int i = 0; i < g.size(); ++i) {
      const double t = g.t(i);
      const double d1 =
          background.phi_derivative_t(t, 1) + phi.derivative_at_t(t, 1);
      const double d2 =
          background.phi_derivative_t(t, 2) + phi.derivative_at_t(t, 2);
      lt[i] = d1;
      lr[i] = d1 + t * d2;
    }
  } else {
    const auto b1 = background.potential().derivative_t(1, accuracy);
    const auto b2 = background.potential().derivative_t(2, accuracy);
    const auto p1 = phi.derivative_t(1, accuracy);
    const auto p2 = phi.derivative_t(2, accuracy);
    for (int i = 0; i < g.size(); ++i) {
      const double t = g.t(i);
      lt[i] = b1[i] + p1[i];
      lr[i] = lt[i] + t * (b2[i] + p2[i]);
    }
  }

  for (int i = 0; i < g.size(); ++i)
    if (!(lt[i] > 0.0) || !(lr[i] > 0.0))
      throw std::runtime_error(
          "ma_ratio: perturbed form not positive at node " +
          std::to_string(i) + " (t = " + std::to_string(g.t(i)) + ")");

  const auto bg_dens = background.density(accuracy);
  std::vector<double> ratio(g.size());
  for (int i = 0; i < g.size(); ++i)
    ratio[i] = std::pow(lt[i], m - 1) * lr[i] / bg_dens[i];
  return RadialFunction::sampled(g, std::move(ratio));
}

RadialKahlerPotential flatten(const RadialKahlerPotential& u0, double R) {
  if (!(R > 2.0)) throw std::invalid_argument("flatten: R > 2 required");
  const RadialFunction& phi0 = u0.potential();
  const auto& g = phi0.grid();
  const CutoffFunction mu(R);

  RadialFunction glued;
  if (phi0.analytic_order() >= 2) {
    const int ord = std::min(4, phi0.analytic_order());
    auto ev = [phi0, mu, ord](double t, int k) -> double {
      if (k > ord)
        throw std::invalid_argument("flatten: derivative order unavailable");
      const double r = std::sqrt(t);
      // derivative arrays of mu(sqrt(t) - R) in t
      double mus[5] = {0, 0, 0, 0, 0};
      for (int j = 0; j <= k; ++j) mus[j] = mu.derivative(r, j);
      const double ind[5] = {r, 0.5 / r, -0.25 / (r * r * r),
                             0.375 / std::pow(r, 5), -0.9375 / std::pow(r, 7)};
      double mud[5] = {mus[0], 0, 0, 0, 0};
      compose_derivatives(mus, ind, mud, k);
      // w = phi0 - t and its derivatives
      double wd[5] = {0, 0, 0, 0, 0};
      for (int j = 0; j <= k; ++j) {
        wd[j] = phi0.derivative_at_t(t, j);
        if (j == 0) wd[j] -= t;
        if (j == 1) wd[j] -= 1.0;
      }
      // Leibniz for (mu w)^{(k)}, plus the flat part
      double acc = 0.0;
      for (int j = 0; j <= k; ++j) {
        double binom = 1.0;
        for (int i = 0; i < j; ++i) binom = binom * (k - i) / (i + 1);
        acc += binom * mud[j] * wd[k - j];
      }
      if (k == 0) return t + acc;
      if (k == 1) return 1.0 + acc;
      return acc;
    };
    glued = RadialFunction::closed_form(g, ev, RadialVariable::SquaredRadius,
                                        ord);
  } else {
    std::vector<double> vals(g.size());
    for (int i = 0; i < g.size(); ++i) {
      const double t = g.t(i);
      vals[i] = t + mu.value(g.r(i)) * (phi0.value(i) - t);
    }
    glued = RadialFunction::sampled(g, std::move(vals));
  }

  RadialEvaluator radial_ev;
  if (glued.analytic_order() >= 2) {
    // grouped radial eigenvalue: delegate to the input inside, exactly 1
    // outside; the generic derivative sum is fine across the annulus where
    // t is order R^2
    RadialFunction glued_copy = glued;
    radial_ev = [u0, glued_copy, R](double t, int) -> double {
      const double r = std::sqrt(t);
      if (r >= R) return 1.0;
      if (r <= R - 1.0) return u0.radial_eigenvalue_at(t);
      return glued_copy.derivative_at_t(t, 1) +
             t * glued_copy.derivative_at_t(t, 2);
    };
  }

  try {
    return RadialKahlerPotential(u0.complex_dimension(), std::move(glued),
                                 u0.class_constant(), std::move(radial_ev));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("flatten: R too small: ") + e.what());
  }
}

RadialFunction ricci_potential(const RadialKahlerPotential& u, int accuracy) {
  const auto& g = u.potential().grid();
  if (u.potential().analytic_order() >= 2) {
    auto ev = [u](double t, int k) -> double {
      if (k != 0)
        throw std::invalid_argument(
            "ricci_potential: closed form carries values only");
      return -u.log_density_at(t);
    };
    return RadialFunction::closed_form(g, ev, RadialVariable::SquaredRadius,
                                       0);
  }
  const auto dens = u.density(accuracy);
  std::vector<double> vals(dens.size());
  for (std::size_t i = 0; i < dens.size(); ++i) vals[i] = -std::log(dens[i]);
  return RadialFunction::sampled(g, std::move(vals));
}

namespace {

// Assemble the solution record shared by both solvers. lambda arrays must be
// the metric eigenvalues of u + phi at the nodes.
MASolution assemble_solution(const MAProblem& p, RadialFunction phi,
                             std::vector<double> lt, std::vector<double> lr,
                             const std::function<double(double)>& logD) {
  const auto& g = phi.grid();
  const int m = p.m;

  MASolution sol;
  sol.case_tag = p.beta > -2.0 * m ? "a" : "b";
  sol.A = sol.case_tag == "b" ? fit_leading_A(phi, m) : 0.0;

  std::vector<double> psi(g.size());
  for (int i = 0; i < g.size(); ++i)
    psi[i] = phi.value(i) - sol.A * std::pow(1.0 + g.t(i), 1 - m);
  sol.psi = RadialFunction::sampled(g, std::move(psi));
  sol.measured_decay_psi = decay_of_psi(sol.psi);

  double margin = lt[0];
  for (double v : lt) margin = std::min(margin, v);
  for (double v : lr) margin = std::min(margin, v);
  sol.positivity_margin = margin;

  double res = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    const double f_i = p.f.evaluate_t(g.t(i));
    res = std::max(res, std::abs((m - 1) * std::log(lt[i]) +
                                 std::log(lr[i]) - logD(g.t(i)) - f_i));
  }
  sol.final_residual = res;

  sol.lambda_transverse = std::move(lt);
  sol.lambda_radial = std::move(lr);
  sol.phi = std::move(phi);
  return sol;
}

}  // namespace

MASolution solve_ma_quadrature(const MAProblem& p, double class_constant) {
  validate_ma(p);
  if (class_constant < 0.0)
    throw std::invalid_argument("solve_ma_quadrature: class constant >= 0");
  const auto& g = p.background.potential().grid();
  const int m = p.m;
  const int n = g.size();

  const auto logD = log_density_fn(p.background);
  // e^f D - 1, the deviation of the prescribed density from flat
  auto dens_dev = [&](double t) {
    return std::expm1(p.f.evaluate_t(t) + logD(t));
  };

  // K(t) = c + int_0^t m s^{m-1} (e^f D - 1) ds, so that
  // t^m (Phi')^m = t^m + K(t)
  // below this scale the deviation integrand is rounding noise of the
  // density evaluation; stop the quadrature refinement there
  const double mass_floor = 1e-15 * std::max(1.0, class_constant);
  std::vector<double> K(n, 0.0);
  {
    // inner segment via the substitution tau = s^m
    const double t0 = g.t_min();
    double inner = integrate(
        [&](double tau) { return dens_dev(std::pow(tau, 1.0 / m)); }, 0.0,
        std::pow(t0, m), 1e-13, 24, mass_floor);
    K[0] = class_constant + inner;
    for (int i = 1; i < n; ++i) {
      const double seg = integrate(
          [&](double s) { return m * std::pow(s, m - 1) * dens_dev(s); },
          g.t(i - 1), g.t(i), 1e-13, 12, mass_floor);
      K[i] = K[i - 1] + seg;
    }
  }

  auto dphi_at = [&](double t, double Kt) {
    const double ratio = Kt / std::pow(t, m);
    if (!(ratio > -1.0))
      throw std::runtime_error(
          "solve_ma_quadrature: density lost positivity (negative integrand)");
    return std::expm1(std::log1p(ratio) / m);
  };

  std::vector<double> dphi(n);  // Phi' - 1 at nodes
  for (int i = 0; i < n; ++i) dphi[i] = dphi_at(g.t(i), K[i]);

  // deviation from flat: dev(t) = -int_t^inf (Phi' - 1)
  std::vector<double> dev(n, 0.0);
  {
    // the tail scale is its own contribution ~ dphi(t_N) t_N, not the
    // global sup of dphi (which is huge at the inner end)
    double tail = 0.0;
    if (std::abs(dphi.back()) * g.t_max() >
        1e-16 * std::max(1.0, class_constant)) {
      const double slope_r = log_log_slope(
          g.radii(), dphi, g.r_max() * std::pow(10.0, -0.25),
          g.r_max() * (1 + 1e-12));
      const double slope_t = slope_r / 2.0;
      if (!(slope_t < -1.0))
        throw std::runtime_error("solve_ma_quadrature: nonintegrable tail");
      tail = power_law_tail(dphi.back(), slope_t, g.t_max());
    }
    dev[n - 1] = -tail;
    for (int i = n - 1; i-- > 0;) {
      const double a = g.t(i);
      const double b = g.t(i + 1);
      const double Ka = K[i];
      auto kernel = [&](double q) {
        return m * std::pow(q, m - 1) * dens_dev(q);
      };
      auto integrand = [&](double s) {
        return dphi_at(s, Ka + gauss_segment(kernel, a, s));
      };
      dev[i] = dev[i + 1] - integrate(integrand, a, b, 1e-13, 8, 1e-16);
    }
  }

  std::vector<double> phi_vals(n), lt(n), lr(n);
  const RadialFunction bg_dev = p.background.deviation_from_flat();
  for (int i = 0; i < n; ++i) {
    phi_vals[i] = dev[i] - bg_dev.value(i);
    lt[i] = 1.0 + dphi[i];
    // the equation itself fixes the radial eigenvalue
    lr[i] = (1.0 + dens_dev(g.t(i))) / std::pow(lt[i], m - 1);
  }

  MASolution sol = assemble_solution(
      p, RadialFunction::sampled(g, std::move(phi_vals)), std::move(lt),
      std::move(lr), logD);

  // a-posteriori consistency: rebuild the residual from finite differences
  // of the emitted potential
  {
    std::vector<double> full(n);
    for (int i = 0; i < n; ++i)
      full[i] = g.t(i) + dev[i];
    const RadialFunction Phi = RadialFunction::sampled(g, std::move(full));
    const auto d1 = Phi.derivative_t(1, 6);
    const auto d2 = Phi.derivative_t(2, 6);
    double res = 0.0;
    for (int i = 4; i < n - 4; ++i) {
      const double l1 = d1[i];
      const double l2 = d1[i] + g.t(i) * d2[i];
      if (!(l1 > 0.0) || !(l2 > 0.0)) continue;
      res = std::max(res, std::abs((m - 1) * std::log(l1) + std::log(l2) -
                                   logD(g.t(i)) - p.f.evaluate_t(g.t(i))));
    }
    sol.final_residual = res;
  }
  return sol;
}

namespace {

struct NewtonLevel {
  int n = 0;
  double h = 0.0;
  std::vector<double> t;       // squared radii
  std::vector<double> up1;     // transverse eigenvalue u'(t)
  std::vector<double> lam_r;   // radial eigenvalue u' + t u''
  std::vector<double> logD;    // background log density
  std::vector<double> f;       // right-hand side at the nodes
};

NewtonLevel build_level(const MAProblem& p, double x0, double dx_base,
                        int base_n, int refine) {
  NewtonLevel lvl;
  lvl.n = (base_n - 1) * (1 << refine) + 1;
  lvl.h = dx_base / (1 << refine);
  lvl.t.resize(lvl.n);
  lvl.up1.resize(lvl.n);
  lvl.lam_r.resize(lvl.n);
  lvl.logD.resize(lvl.n);
  lvl.f.resize(lvl.n);
  const auto logD = log_density_fn(p.background);
  const bool analytic = p.background.potential().analytic_order() >= 2;
  const auto& bg = p.background;
  for (int i = 0; i < lvl.n; ++i) {
    const double t = std::exp(x0 + i * lvl.h);
    lvl.t[i] = t;
    if (analytic) {
      lvl.up1[i] = bg.transverse_eigenvalue_at(t);
      lvl.lam_r[i] = bg.radial_eigenvalue_at(t);
    }
    lvl.logD[i] = logD(t);
    lvl.f[i] = p.f.evaluate_t(t);
  }
  if (!analytic) {
    // base grid only: take the background eigenvalues from its own nodes
    const auto b1 = bg.eigenvalue_transverse();
    const auto b2 = bg.eigenvalue_radial();
    for (int i = 0; i < lvl.n; ++i) {
      lvl.up1[i] = b1[i];
      lvl.lam_r[i] = b2[i];
    }
  }
  return lvl;
}

struct ThetaArrays {
  std::vector<double> th1, th2;  // theta phi, theta^2 phi at the nodes
};

// second-order stencils with the boundary rows eliminated through ghosts:
// inner Neumann theta phi = g_in, outer Robin theta phi = (1-m) phi
ThetaArrays theta_of(const std::vector<double>& phi, const NewtonLevel& lvl,
                     double g_in, int m) {
  const int n = lvl.n;
  const double h = lvl.h;
  ThetaArrays out;
  out.th1.resize(n);
  out.th2.resize(n);
  out.th1[0] = g_in;
  out.th2[0] = (2.0 * phi[1] - 2.0 * phi[0] - 2.0 * h * g_in) / (h * h);
  for (int i = 1; i < n - 1; ++i) {
    out.th1[i] = (phi[i + 1] - phi[i - 1]) / (2.0 * h);
    out.th2[i] = (phi[i + 1] - 2.0 * phi[i] + phi[i - 1]) / (h * h);
  }
  out.th1[n - 1] = (1.0 - m) * phi[n - 1];
  out.th2[n - 1] = (2.0 * phi[n - 2] - 2.0 * phi[n - 1] +
                    2.0 * h * (1.0 - m) * phi[n - 1]) /
                   (h * h);
  return out;
}

bool residual_of(const std::vector<double>& phi, const NewtonLevel& lvl,
                 double g_in, int m, double s, std::vector<double>& R,
                 std::vector<double>* lt_out = nullptr,
                 std::vector<double>* lr_out = nullptr);

// sixth-order theta arrays for the defect correction; the two boundary
// rows keep their ghost forms so the boundary conditions stay intact
ThetaArrays theta_high_order(const std::vector<double>& phi,
                             const NewtonLevel& lvl, double g_in, int m) {
  ThetaArrays out;
  out.th1 = fd_derivative_uniform(phi, lvl.h, 1, 6);
  out.th2 = fd_derivative_uniform(phi, lvl.h, 2, 6);
  const ThetaArrays bc = theta_of(phi, lvl, g_in, m);
  const int n = lvl.n;
  out.th1[0] = bc.th1[0];
  out.th2[0] = bc.th2[0];
  out.th1[n - 1] = bc.th1[n - 1];
  out.th2[n - 1] = bc.th2[n - 1];
  return out;
}

bool residual_high_order(const std::vector<double>& phi,
                         const NewtonLevel& lvl, double g_in, int m, double s,
                         std::vector<double>& R) {
  const int n = lvl.n;
  R.resize(n);
  const ThetaArrays th = theta_high_order(phi, lvl, g_in, m);
  for (int i = 0; i < n; ++i) {
    const double t = lvl.t[i];
    const double lt = lvl.up1[i] + th.th1[i] / t;
    const double lr = lvl.lam_r[i] + th.th2[i] / t;
    if (!(lt > 0.0) || !(lr > 0.0)) return false;
    R[i] = (m - 1) * std::log(lt) + std::log(lr) - lvl.logD[i] - s * lvl.f[i];
  }
  return true;
}

// assemble and solve one tridiagonal correction J2 delta = -R
bool tridiagonal_correction(const std::vector<double>& phi,
                            const NewtonLevel& lvl, double g_in, int m,
                            double s, const std::vector<double>& R,
                            std::vector<double>& delta) {
  const int n = lvl.n;
  const double h = lvl.h;
  std::vector<double> R2, lt(n), lr(n);
  if (!residual_of(phi, lvl, g_in, m, s, R2, &lt, &lr)) return false;
  std::vector<double> lower(n, 0.0), diag(n, 0.0), upper(n, 0.0);
  delta.resize(n);
  for (int i = 0; i < n; ++i) delta[i] = -R[i];
  {
    const double t = lvl.t[0];
    diag[0] = (1.0 / (lr[0] * t)) * (-2.0 / (h * h));
    upper[0] = (1.0 / (lr[0] * t)) * (2.0 / (h * h));
  }
  for (int i = 1; i < n - 1; ++i) {
    const double t = lvl.t[i];
    const double a = (m - 1) / (lt[i] * t);
    const double b = 1.0 / (lr[i] * t);
    lower[i] = -a / (2.0 * h) + b / (h * h);
    diag[i] = -2.0 * b / (h * h);
    upper[i] = a / (2.0 * h) + b / (h * h);
  }
  {
    const int i = n - 1;
    const double t = lvl.t[i];
    const double a = (m - 1) / (lt[i] * t);
    const double b = 1.0 / (lr[i] * t);
    lower[i] = 2.0 * b / (h * h);
    diag[i] = a * (1.0 - m) + b * (-2.0 + 2.0 * h * (1.0 - m)) / (h * h);
  }
  solve_tridiagonal(lower, diag, upper, delta);
  return true;
}

// polish the converged second-order iterate until it satisfies the
// sixth-order discretization; the second-order operator stays the
// preconditioner, so every linear solve remains tridiagonal
int defect_correct(std::vector<double>& phi, const NewtonLevel& lvl,
                   double g_in, int m, double s) {
  const int n = lvl.n;
  std::vector<double> R, delta, trial(n);
  double prev_step = -1.0;
  int stalls = 0;
  int used = 0;
  for (int k = 0; k < 60; ++k) {
    if (!residual_high_order(phi, lvl, g_in, m, s, R))
      throw std::runtime_error(
          "solve_ma_continuity: defect correction lost positivity");
    if (!tridiagonal_correction(phi, lvl, g_in, m, s, R, delta))
      throw std::runtime_error(
          "solve_ma_continuity: defect correction lost positivity");
    ++used;
    double alpha = 1.0;
    bool ok = false;
    std::vector<double> probe;
    for (int halvings = 0; halvings < 40; ++halvings) {
      for (int i = 0; i < n; ++i) trial[i] = phi[i] + alpha * delta[i];
      if (residual_high_order(trial, lvl, g_in, m, s, probe)) {
        ok = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!ok)
      throw std::runtime_error(
          "solve_ma_continuity: defect correction lost positivity");
    double step_inf = 0.0, phi_inf = 0.0;
    for (int i = 0; i < n; ++i) {
      step_inf = std::max(step_inf, std::abs(trial[i] - phi[i]));
      phi_inf = std::max(phi_inf, std::abs(trial[i]));
    }
    phi = trial;
    const double scale = std::max(1.0, phi_inf);
    if (step_inf <= 1e-13 * scale) break;
    if (prev_step >= 0.0 && step_inf >= 0.5 * prev_step &&
        step_inf <= 1e-10 * scale) {
      if (++stalls >= 2) break;
    } else {
      stalls = 0;
    }
    prev_step = step_inf;
  }
  return used;
}

// residual of the log-density equation; returns false when positivity fails
bool residual_of(const std::vector<double>& phi, const NewtonLevel& lvl,
                 double g_in, int m, double s, std::vector<double>& R,
                 std::vector<double>* lt_out, std::vector<double>* lr_out) {
  const int n = lvl.n;
  R.resize(n);
  const ThetaArrays th = theta_of(phi, lvl, g_in, m);
  for (int i = 0; i < n; ++i) {
    const double t = lvl.t[i];
    const double lt = lvl.up1[i] + th.th1[i] / t;
    const double lr = lvl.lam_r[i] + th.th2[i] / t;
    if (!(lt > 0.0) || !(lr > 0.0)) return false;
    R[i] = (m - 1) * std::log(lt) + std::log(lr) - lvl.logD[i] - s * lvl.f[i];
    if (lt_out) (*lt_out)[i] = lt;
    if (lr_out) (*lr_out)[i] = lr;
  }
  return true;
}

double sup_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

struct NewtonOutcome {
  bool converged = false;
  int iterations = 0;
  std::vector<double> history;
};

NewtonOutcome newton_solve(std::vector<double>& phi, const NewtonLevel& lvl,
                           double g_in, int m, double s,
                           const MASolverOptions& opts) {
  const int n = lvl.n;
  const double h = lvl.h;
  NewtonOutcome out;
  std::vector<double> R, lt(n), lr(n);
  double prev = -1.0;
  double prev_step = -1.0;
  int rises = 0;
  int step_stalls = 0;

  for (int iter = 0; iter < opts.max_newton; ++iter) {
    if (!residual_of(phi, lvl, g_in, m, s, R, &lt, &lr)) return out;
    const double res = sup_norm(R);
    if (std::getenv("ALE_NEWTON_TRACE")) {
      int arg = 0;
      for (int ii = 0; ii < lvl.n; ++ii)
        if (std::abs(R[ii]) > std::abs(R[arg])) arg = ii;
      std::fprintf(stderr, "newton iter=%d s=%.3f res=%.3e argmax=%d t=%.3e\n",
                   iter, s, res, arg, lvl.t[arg]);
    }
    out.history.push_back(res);
    ++out.iterations;
    if (res < opts.newton_tol) {
      out.converged = true;
      return out;
    }
    // residual growth at a meaningful scale means divergence; below that
    // the inner rows only bounce on their rounding floor (they divide by
    // the t^m-sized radial eigenvalue) and the step size is the criterion
    if (prev >= 0.0 && res >= prev && res > 1e-6) {
      if (++rises >= 2) return out;
    } else {
      rises = 0;
    }
    prev = res;

    // tridiagonal Jacobian of the log-density residual
    std::vector<double> lower(n, 0.0), diag(n, 0.0), upper(n, 0.0), rhs(n);
    for (int i = 0; i < n; ++i) rhs[i] = -R[i];
    {
      const double t = lvl.t[0];
      diag[0] = (1.0 / (lr[0] * t)) * (-2.0 / (h * h));
      upper[0] = (1.0 / (lr[0] * t)) * (2.0 / (h * h));
    }
    for (int i = 1; i < n - 1; ++i) {
      const double t = lvl.t[i];
      const double a = (m - 1) / (lt[i] * t);
      const double b = 1.0 / (lr[i] * t);
      lower[i] = -a / (2.0 * h) + b / (h * h);
      diag[i] = -2.0 * b / (h * h);
      upper[i] = a / (2.0 * h) + b / (h * h);
    }
    {
      const int i = n - 1;
      const double t = lvl.t[i];
      const double a = (m - 1) / (lt[i] * t);
      const double b = 1.0 / (lr[i] * t);
      lower[i] = 2.0 * b / (h * h);
      diag[i] = a * (1.0 - m) +
                b * (-2.0 + 2.0 * h * (1.0 - m)) / (h * h);
    }
    solve_tridiagonal(lower, diag, upper, rhs);

    // damp until the step keeps the form positive
    double alpha = 1.0;
    std::vector<double> trial(n);
    bool ok = false;
    for (int halvings = 0; halvings < 50; ++halvings) {
      for (int i = 0; i < n; ++i) trial[i] = phi[i] + alpha * rhs[i];
      std::vector<double> Rt;
      if (residual_of(trial, lvl, g_in, m, s, Rt)) {
        ok = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!ok) return out;  // persistent positivity loss

    double step_inf = 0.0, phi_inf = 0.0;
    for (int i = 0; i < n; ++i) {
      step_inf = std::max(step_inf, std::abs(trial[i] - phi[i]));
      phi_inf = std::max(phi_inf, std::abs(trial[i]));
    }
    if (std::getenv("ALE_NEWTON_TRACE")) {
      int sarg = 0;
      for (int i = 0; i < n; ++i)
        if (std::abs(trial[i] - phi[i]) > std::abs(trial[sarg] - phi[sarg]))
          sarg = i;
      std::fprintf(stderr, "   step_inf=%.3e alpha=%.3g sarg=%d t=%.3e\n",
                   step_inf, alpha, sarg, lvl.t[sarg]);
    }
    phi = trial;
    const double step_scale = std::max(1.0, phi_inf);
    if (step_inf <= 1e-13 * step_scale) {
      out.converged = true;
      return out;
    }
    // geometric step contraction that stops shrinking has reached the
    // rounding floor of the iterate
    if (prev_step >= 0.0 && step_inf >= 0.5 * prev_step &&
        step_inf <= 1e-9 * step_scale) {
      if (++step_stalls >= 2) {
        out.converged = true;
        return out;
      }
    } else {
      step_stalls = 0;
    }
    prev_step = step_inf;
  }
  return out;
}

// class-constant boundary flux at the inner node for homotopy weight s
double inner_theta(const MAProblem& p, const NewtonLevel& lvl,
                   const std::function<double(double)>& logD,
                   double class_constant, double s) {
  const int m = p.m;
  const double t0 = lvl.t[0];
  auto dens_dev = [&](double t) {
    return std::expm1(s * p.f.evaluate_t(t) + logD(t));
  };
  const double inner = integrate(
      [&](double tau) { return dens_dev(std::pow(tau, 1.0 / m)); }, 0.0,
      std::pow(t0, m), 1e-13, 24, 1e-15 * std::max(1.0, class_constant));
  const double K0 = class_constant + inner;
  const double ratio = K0 / std::pow(t0, m);
  if (!(ratio > -1.0))
    throw std::runtime_error("solve_ma_continuity: negative density at the "
                             "inner boundary");
  const double q0 = t0 * (1.0 + std::expm1(std::log1p(ratio) / m));
  return q0 - t0 * lvl.up1[0];
}

// quartic midpoint interpolation onto the twice-refined grid
std::vector<double> prolong(const std::vector<double>& coarse) {
  const int nc = static_cast<int>(coarse.size());
  std::vector<double> fine(2 * nc - 1);
  for (int i = 0; i < nc; ++i) fine[2 * i] = coarse[i];
  for (int i = 0; i + 1 < nc; ++i) {
    int a = i - 1, b = i + 2;
    if (a < 0) {
      a = 0;
      b = 3;
    }
    if (b >= nc) {
      b = nc - 1;
      a = nc - 4;
    }
    // cubic through coarse[a..b] evaluated at the midpoint of [i, i+1]
    const double xa = a, xm = i + 0.5;
    double acc = 0.0;
    for (int j = 0; j < 4; ++j) {
      double l = 1.0;
      for (int k = 0; k < 4; ++k) {
        if (j == k) continue;
        l *= (xm - (xa + k)) / (j - k);
      }
      acc += l * coarse[a + j];
    }
    fine[2 * i + 1] = acc;
  }
  return fine;
}

}  // namespace

MASolution solve_ma_continuity(const MAProblem& p, double class_constant,
                               int steps, const MASolverOptions& opts) {
  validate_ma(p);
  if (class_constant < 0.0)
    throw std::invalid_argument("solve_ma_continuity: class constant >= 0");
  if (steps < 1)
    throw std::invalid_argument("solve_ma_continuity: steps >= 1");

  const auto& g = p.background.potential().grid();
  const int m = p.m;
  const int base_n = g.size();
  const double x0 = std::log(g.t_min());
  const double dx = g.log_t_step();

  int levels = opts.refinement_levels;
  if (levels < 1 || levels > 3)
    throw std::invalid_argument("solve_ma_continuity: 1..3 levels");
  if (p.background.potential().analytic_order() < 2) levels = 1;

  const auto logD = log_density_fn(p.background);

  int total_iterations = 0;
  std::vector<double> first_history;

  // homotopy on the base level, plain Newton polish on refinements
  std::vector<std::vector<double>> phi_levels;
  for (int l = 0; l < levels; ++l) {
    const NewtonLevel lvl = build_level(p, x0, dx, base_n, l);
    std::vector<double> phi;
    if (l == 0) {
      phi.assign(lvl.n, 0.0);
      const double ds_uniform = 1.0 / steps;
      double s = 0.0;
      double ds = ds_uniform;
      const double ds_floor = ds_uniform / 64.0;
      while (s < 1.0 - 1e-14) {
        const double target = std::min(1.0, s + ds);
        std::vector<double> attempt = phi;
        const double g_in =
            inner_theta(p, lvl, logD, class_constant, target);
        NewtonOutcome res =
            newton_solve(attempt, lvl, g_in, m, target, opts);
        total_iterations += res.iterations;
        if (res.converged) {
          if (first_history.empty()) first_history = res.history;
          phi = std::move(attempt);
          s = target;
          ds = std::min(ds_uniform, 1.0 - s + 1e-16);
        } else {
          ds *= 0.5;
          if (ds < ds_floor)
            throw std::runtime_error(
                "solve_ma_continuity: Newton diverged; increase steps");
        }
      }
    } else {
      phi = prolong(phi_levels.back());
      const double g_in = inner_theta(p, lvl, logD, class_constant, 1.0);
      NewtonOutcome res = newton_solve(phi, lvl, g_in, m, 1.0, opts);
      total_iterations += res.iterations;
      if (!res.converged)
        throw std::runtime_error(
            "solve_ma_continuity: refinement Newton failed to converge");
    }
    {
      // linear correction sweeps, not Newton iterations
      const double g_in = inner_theta(p, lvl, logD, class_constant, 1.0);
      defect_correct(phi, lvl, g_in, m, 1.0);
    }
    phi_levels.push_back(std::move(phi));
  }

  // the finest defect-corrected level carries the answer; restrict it and
  // its theta-derivatives to the base nodes
  const int finest = levels - 1;
  std::vector<double> phi_final(base_n);
  std::vector<double> lt(base_n), lr(base_n);
  {
    const NewtonLevel lvl = build_level(p, x0, dx, base_n, finest);
    const double g_in = inner_theta(p, lvl, logD, class_constant, 1.0);
    const ThetaArrays th =
        theta_high_order(phi_levels[finest], lvl, g_in, m);
    const int stride = 1 << finest;
    for (int i = 0; i < base_n; ++i) {
      const int j = i * stride;
      phi_final[i] = phi_levels[finest][j];
      lt[i] = lvl.up1[j] + th.th1[j] / lvl.t[j];
      lr[i] = lvl.lam_r[j] + th.th2[j] / lvl.t[j];
      if (!(lt[i] > 0.0) || !(lr[i] > 0.0))
        throw std::runtime_error(
            "solve_ma_continuity: refined form lost positivity");
    }
  }

  MASolution sol = assemble_solution(
      p, RadialFunction::sampled(g, phi_final), std::move(lt), std::move(lr),
      logD);
  sol.newton_iterations = total_iterations;
  sol.residual_history = std::move(first_history);
  return sol;
}

MALeadingCoefficient leading_coefficient_ma(const MAProblem& p,
                                            const MASolution& solution) {
  validate_ma(p);
  const int m = p.m;
  if (!(p.beta < -2.0 * m))
    throw std::invalid_argument(
        "leading_coefficient_ma: integral needs beta < -2m");
  const auto& g = p.background.potential().grid();
  const auto logD = log_density_fn(p.background);

  auto integrand = [&](double t) {
    // (1 - e^f) D t^{m-1}
    const double f = p.f.evaluate_t(t);
    return -std::expm1(f) * std::exp(logD(t)) * std::pow(t, m - 1);
  };
  double I = integrate(integrand, 0.0, g.t_min());
  for (int i = 1; i < g.size(); ++i)
    I += integrate(integrand, g.t(i - 1), g.t(i), 1e-13, 12);

  std::vector<double> w(g.size());
  for (int i = 0; i < g.size(); ++i) w[i] = integrand(g.t(i));
  double scale = 0.0;
  for (double v : w) scale = std::max(scale, std::abs(v));
  bool negligible = false;
  const double slope_r = measured_tail_slope(g, w, scale, &negligible);
  if (!negligible) {
    const double slope_t = slope_r / 2.0;
    if (!(slope_t < -1.0))
      throw std::runtime_error("leading_coefficient_ma: divergent integral");
    I += power_law_tail(w.back(), slope_t, g.t_max());
  }

  const double omega = sphere_area(2 * m);
  // int_X (1-e^f) dV = (Omega/|G|) * I / 2 in t, prefactor cancels it
  const double integral_X = omega / p.group_order * 0.5 * I;
  MALeadingCoefficient out;
  out.formula = p.group_order / ((m - 1) * omega) * integral_X;
  out.fitted = solution.A;
  return out;
}

}  // namespace ale
