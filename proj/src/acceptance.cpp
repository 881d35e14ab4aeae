#include "ale/acceptance.hpp"

#include <cmath>
#include <complex>
#include <numeric>
#include <random>

#include "ale/calabi.hpp"
#include "ale/flat_laplacian.hpp"
#include "ale/function_registry.hpp"
#include "ale/hermitian_form.hpp"
#include "ale/monge_ampere.hpp"
#include "ale/quadrature.hpp"
#include "ale/quotient_group.hpp"
#include "ale/radial_field.hpp"

namespace ale {

namespace {

AcceptanceCheck two_sided(const std::string& name, double computed,
                          double target, double tol) {
  return {name, computed, target, tol, std::abs(computed - target) <= tol};
}

AcceptanceCheck upper_bound(const std::string& name, double computed,
                            double bound) {
  return {name, computed, bound, bound, computed <= bound};
}

void finish(AcceptanceCriterion& c) {
  c.pass = true;
  for (const auto& chk : c.checks) c.pass = c.pass && chk.pass;
}

// 1. determinant identity of the explicit metric, closed form and stencils
AcceptanceCriterion criterion_ricci_flat() {
  AcceptanceCriterion c{1, "explicit_metric_ricci_flatness", false, {}};
  const RadialGrid g = RadialGrid::log_t(1e-4, 1e8, 2000);
  // stencil differentiation is conditioned by eps |Phi| / h^2 against the
  // t^m curvature scale; its 2000-node window starts past the log-dominated
  // inner region
  const RadialGrid g_fd = RadialGrid::log_t(0.5, 1e8, 2000);
  for (int m : {2, 3, 4, 5}) {
    c.checks.push_back(upper_bound(
        "determinant_identity_closed_m" + std::to_string(m),
        ricci_flat_residual(m, g), 1e-13));
    c.checks.push_back(upper_bound(
        "determinant_identity_stencil_m" + std::to_string(m),
        ricci_flat_residual_fd(m, g_fd), 1e-8));
  }
  finish(c);
  return c;
}

// 2. tail coefficient of the potential deviation, and its sign in solves
AcceptanceCriterion criterion_asymptotic_coefficient() {
  AcceptanceCriterion c{2, "asymptotic_tail_coefficient", false, {}};
  for (int m : {2, 3, 4}) {
    const double target = -1.0 / (m * (m - 1.0));
    const double fitted = asymptotic_coefficient(m, 1e4, 1e8);
    c.checks.push_back(two_sided("fit_matches_exact_value_m" +
                                     std::to_string(m),
                                 fitted, target, 0.005 * std::abs(target)));
  }
  // pipeline sign checks (two independent configurations)
  for (const auto& [m, R] : {std::pair<int, double>{2, 10.0},
                             std::pair<int, double>{2, 6.0}}) {
    const RadialGrid g = RadialGrid::log_t(1e-4, 1e8, 1200);
    const RadialKahlerPotential uhat = flatten(calabi_metric(m, g), R);
    MAProblem p{m, uhat, ricci_potential(uhat), -(2.0 * m + 1.0), m};
    const MASolution sol = solve_ma_quadrature(p, 1.0);
    c.checks.push_back(upper_bound(
        "pipeline_tail_coefficient_negative_R" +
            std::to_string(static_cast<int>(R)),
        sol.A < 0.0 ? 0.0 : 1.0, 0.5));
  }
  finish(c);
  return c;
}

// 3. sharp decay of the metric deviation; remainder bounded by the tail rate
AcceptanceCriterion criterion_sharp_decay() {
  AcceptanceCriterion c{3, "sharp_decay_orders", false, {}};
  for (int m : {2, 3}) {
    for (int k = 0; k <= 2; ++k) {
      const double target = -(2.0 * m + k);
      c.checks.push_back(two_sided(
          "metric_deviation_decay_m" + std::to_string(m) + "_k" +
              std::to_string(k),
          metric_decay_profile(m, k), target, 0.05 * std::abs(target)));
    }
    const RadialGrid gw = RadialGrid::log_t(1.0, 1e4, 1024);
    auto ev = [m](double t, int k) { return calabi_remainder_chi(m, t, k); };
    const RadialFunction chi =
        RadialFunction::closed_form(gw, ev, RadialVariable::SquaredRadius, 2);
    // the remainder is O(r^{-2m}) with O(r^{-2m-1}) gradient; the measured
    // rate may be (and is) faster, so the bound is one-sided. The fit stays
    // inside the window where the remainder clears the rounding floor.
    c.checks.push_back(upper_bound(
        "remainder_decay_bound_m" + std::to_string(m),
        decay_order(chi, 0, 5.0, 30.0), -2.0 * m + 0.05 * 2.0 * m));
    c.checks.push_back(upper_bound(
        "remainder_gradient_decay_bound_m" + std::to_string(m),
        decay_order(chi, 1, 5.0, 30.0),
        -(2.0 * m + 1.0) + 0.05 * (2.0 * m + 1.0)));
  }
  finish(c);
  return c;
}

// 4. closed-form Poisson oracle in dimension four
AcceptanceCriterion criterion_poisson_oracle() {
  AcceptanceCriterion c{4, "poisson_closed_form_oracle", false, {}};
  const RadialGrid g = RadialGrid::log_r(1e-2, 1e4, 2000);
  PoissonProblem p{4, 1, make_registry_function("harmonic_radius_laplacian",
                                                4.0, g),
                   -6.0};
  const PoissonSolution sol = solve_poisson(p);
  double sup_dev = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    const double exact = 1.0 / (1.0 + g.r(i) * g.r(i));
    sup_dev = std::max(sup_dev, std::abs(sol.u.value(i) - exact));
  }
  c.checks.push_back(
      upper_bound("solution_matches_inverse_quadratic", sup_dev, 1e-8));
  c.checks.push_back(two_sided("harmonic_coefficient_value", sol.A, 1.0,
                               1e-8));
  c.checks.push_back(two_sided("coefficient_matches_quadrature", sol.A,
                               leading_coefficient(p), 1e-10));
  finish(c);
  return c;
}

// 5. integral of the harmonic-tail laplacian equals the sphere-area constant
AcceptanceCriterion criterion_integral_identity() {
  AcceptanceCriterion c{5, "harmonic_tail_integral_identity", false, {}};
  const RadialGrid g = RadialGrid::log_r(1e-2, 1e4, 1500);
  for (const auto& [n, order] :
       {std::pair<int, int>{4, 1}, std::pair<int, int>{4, 2},
        std::pair<int, int>{6, 1}}) {
    const auto [computed, target] = delta_radius_identity(n, order, g);
    c.checks.push_back(two_sided(
        "sphere_volume_integral_n" + std::to_string(n) + "_G" +
            std::to_string(order),
        computed, target, 1e-6 * std::abs(target)));
  }
  finish(c);
  return c;
}

// 6. decay transfer for the two weight windows
AcceptanceCriterion criterion_weight_dichotomy() {
  AcceptanceCriterion c{6, "weight_dichotomy", false, {}};
  const RadialGrid g = RadialGrid::log_r(1e-2, 1e4, 1500);
  for (double beta : {-2.5, -3.0, -3.5}) {
    PoissonProblem p{4, 1,
                     make_registry_function("inverse_quadratic_power", -beta,
                                            g),
                     beta};
    const PoissonSolution sol = solve_poisson(p);
    c.checks.push_back(two_sided(
        "case_a_decay_transfer_beta" + std::to_string(beta),
        sol.measured_decay_u, beta + 2.0, 0.02 * std::abs(beta + 2.0)));
  }
  {
    // zero total mass: the solution decays strictly faster than r^{2-n}
    const RadialGrid gz = RadialGrid::log_r(1e-2, 30.0, 1500);
    PoissonProblem p{4, 1, make_registry_function("zero_mean_quartic", 0.0,
                                                  gz),
                     -6.0};
    const PoissonSolution sol = solve_poisson(p);
    c.checks.push_back(upper_bound("zero_mass_coefficient", std::abs(sol.A),
                                   1e-10));
    const double slope = decay_order(sol.u, 0, 4.0, 6.5);
    c.checks.push_back(upper_bound("zero_mass_fast_decay", slope, -2.5));
  }
  finish(c);
  return c;
}

// 7. pointwise identities over random Hermitian samples
AcceptanceCriterion criterion_pointwise_identities() {
  AcceptanceCriterion c{7, "pointwise_kahler_identities", false, {}};
  std::mt19937 rng(777);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int m : {2, 3, 4, 5}) {
    double max_trace = 0.0, max_primitive = 0.0;
    for (int s = 0; s < 1000; ++s) {
      HermitianForm::Matrix z(m, m);
      for (int i = 0; i < m; ++i) {
        z(i, i) = gauss(rng);
        for (int j = i + 1; j < m; ++j) {
          const std::complex<double> v(gauss(rng), gauss(rng));
          z(i, j) = v;
          z(j, i) = std::conj(v);
        }
      }
      max_trace = std::max(max_trace,
                           trace_identity_residual(HermitianForm(z),
                                                   -z.trace().real()));
      HermitianForm::Matrix z0 = z;
      const std::complex<double> mean = z.trace() / static_cast<double>(m);
      for (int i = 0; i < m; ++i) z0(i, i) -= mean;
      max_primitive =
          std::max(max_primitive,
                   primitive_square_identity_residual(HermitianForm(z0)));
    }
    c.checks.push_back(upper_bound(
        "trace_identity_m" + std::to_string(m), max_trace, 1e-12));
    c.checks.push_back(upper_bound(
        "primitive_square_identity_m" + std::to_string(m), max_primitive,
        1e-12));
  }
  finish(c);
  return c;
}

// 8. end-to-end pipeline: flatten, extract the Ricci potential, resolve
AcceptanceCriterion criterion_pipeline() {
  AcceptanceCriterion c{8, "end_to_end_pipeline", false, {}};
  const int m = 2;
  const RadialGrid g = RadialGrid::log_t(1e-4, 1e8, 2000);
  const RadialKahlerPotential uhat = flatten(calabi_metric(m, g), 10.0);
  MAProblem p{m, uhat, ricci_potential(uhat), -(2.0 * m + 1.0), m};

  const MASolution cont = solve_ma_continuity(p, 1.0, 1, {});
  const MASolution quad = solve_ma_quadrature(p, 1.0);

  double metric_dev = 0.0, ricci_sup = 0.0, agree = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    const auto [lt, lr] = calabi_derivatives(m, g.t(i));
    metric_dev = std::max(metric_dev,
                          std::abs(cont.lambda_transverse[i] - lt));
    metric_dev = std::max(metric_dev, std::abs(cont.lambda_radial[i] - lr));
    ricci_sup = std::max(
        ricci_sup, std::abs((m - 1) * std::log(cont.lambda_transverse[i]) +
                            std::log(cont.lambda_radial[i])));
    agree = std::max(agree,
                     std::abs(cont.phi.value(i) - quad.phi.value(i)));
  }
  c.checks.push_back(
      upper_bound("explicit_metric_recovery_sup", metric_dev, 1e-6));
  c.checks.push_back(
      upper_bound("solver_cross_agreement_sup", agree, 1e-8));
  c.checks.push_back(
      upper_bound("solved_metric_ricci_potential_sup", ricci_sup, 1e-8));

  // local quadratic convergence of the Newton iteration (cold start);
  // pairs are counted above the discrete residual floor of the ill-scaled
  // inner rows
  double floor_res = cont.residual_history.empty()
                         ? 0.0
                         : cont.residual_history.front();
  for (double r : cont.residual_history) floor_res = std::min(floor_res, r);
  floor_res *= 5.0;
  bool quadratic = true;
  int measured_pairs = 0;
  for (std::size_t i = 0; i + 1 < cont.residual_history.size(); ++i) {
    const double rk = cont.residual_history[i];
    const double rk1 = cont.residual_history[i + 1];
    if (rk <= 2e-2 && rk1 > floor_res) {
      ++measured_pairs;
      if (rk1 > 100.0 * rk * rk) quadratic = false;
    }
  }
  c.checks.push_back(upper_bound("newton_quadratic_convergence",
                                 (quadratic && measured_pairs > 0) ? 0.0
                                                                   : 1.0,
                                 0.5));
  finish(c);
  return c;
}

// 9. every free paired special-unitary cyclic action is terminal
AcceptanceCriterion criterion_terminality() {
  AcceptanceCriterion c{9, "symplectic_pairing_terminality", false, {}};
  long long tested = 0;
  bool all_terminal = true;
  for (int m : {4, 6}) {
    for (int k = 1; k <= 20; ++k) {
      // coprime residues; tuples enumerated in nondecreasing order since
      // every test is permutation invariant
      std::vector<int> units;
      for (int a = 0; a < k; ++a)
        if (std::gcd(a, k) == 1) units.push_back(a);
      std::vector<int> tuple(m, 0);
      const int u = static_cast<int>(units.size());
      std::vector<int> idx(m, 0);
      for (;;) {
        for (int j = 0; j < m; ++j) tuple[j] = units[idx[j]];
        const CyclicQuotient q(m, k, tuple);
        if (acts_freely(q) && in_special_unitary(q) &&
            satisfies_symplectic_pairing(q)) {
          ++tested;
          if (!is_terminal(q)) all_terminal = false;
        }
        int j = m - 1;
        while (j >= 0 && idx[j] == u - 1) --j;
        if (j < 0) break;
        const int v = idx[j] + 1;
        for (int l = j; l < m; ++l) idx[l] = v;  // nondecreasing
      }
    }
  }
  c.checks.push_back(upper_bound("all_paired_actions_terminal",
                                 all_terminal ? 0.0 : 1.0, 0.5));
  c.checks.push_back(upper_bound("scan_nonempty", tested > 0 ? 0.0 : 1.0,
                                 0.5));
  finish(c);
  return c;
}

std::vector<AcceptanceCriterion> run_first_nine() {
  return {criterion_ricci_flat(),      criterion_asymptotic_coefficient(),
          criterion_sharp_decay(),     criterion_poisson_oracle(),
          criterion_integral_identity(), criterion_weight_dichotomy(),
          criterion_pointwise_identities(), criterion_pipeline(),
          criterion_terminality()};
}

}  // namespace

nlohmann::json acceptance_summary_json(
    const std::vector<AcceptanceCriterion>& criteria) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : criteria) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& chk : c.checks)
      checks.push_back({{"name", chk.name},
                        {"computed", chk.computed},
                        {"target", chk.target},
                        {"tolerance", chk.tolerance},
                        {"pass", chk.pass}});
    arr.push_back({{"index", c.index},
                   {"name", c.name},
                   {"pass", c.pass},
                   {"checks", checks}});
  }
  return {{"criteria", arr}};
}

std::vector<AcceptanceCriterion> run_acceptance_suite() {
  std::vector<AcceptanceCriterion> out = run_first_nine();

  // 10. determinism: a fresh rerun serializes to identical bytes
  AcceptanceCriterion det{10, "deterministic_reports", false, {}};
  const std::string first = acceptance_summary_json(out).dump();
  const std::string second =
      acceptance_summary_json(run_first_nine()).dump();
  det.checks.push_back(upper_bound("byte_identical_summaries",
                                   first == second ? 0.0 : 1.0, 0.5));
  det.pass = det.checks.front().pass;
  out.push_back(det);
  return out;
}

}  // namespace ale
