#include "ale/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace ale {

double sphere_area(int n) {
  if (n < 2) throw std::invalid_argument("sphere_area: n >= 2");
  return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

namespace {

// 8-point Gauss-Legendre on [-1, 1]
constexpr double kGx[8] = {
    -0.9602898564975362, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
    0.7966664774136267,  0.9602898564975362};
constexpr double kGw[8] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};

double gauss8(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < 8; ++i) acc += kGw[i] * f(c + hw * kGx[i]);
  return acc * hw;
}

double adaptive(const std::function<double(double)>& f, double a, double b,
                double whole, double rel_tol, double abs_floor, int depth) {
  const double m = 0.5 * (a + b);
  const double left = gauss8(f, a, m);
  const double right = gauss8(f, m, b);
  const double sum = left + right;
  if (depth <= 0) return sum;
  const double tol =
      std::max(rel_tol * std::max(std::abs(whole), std::abs(sum)), abs_floor);
  if (std::abs(sum - whole) <= tol) return sum;
  return adaptive(f, a, m, left, rel_tol, 0.5 * abs_floor, depth - 1) +
         adaptive(f, m, b, right, rel_tol, 0.5 * abs_floor, depth - 1);
}

}  // namespace

double gauss_segment(const std::function<double(double)>& f, double a,
                     double b) {
  return gauss8(f, a, b);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, int max_depth, double abs_tol) {
  if (a == b) return 0.0;
  // coarse magnitude of the integrand fixes an absolute floor, so regions
  // of internal cancellation do not force full-depth recursion
  double mag = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double x0 = a + (b - a) * i / 4.0;
    const double x1 = a + (b - a) * (i + 1) / 4.0;
    mag += std::abs(gauss8(f, x0, x1));
  }
  const double abs_floor =
      std::max(abs_tol, rel_tol * std::max(mag, 1e-300));
  return adaptive(f, a, b, gauss8(f, a, b), rel_tol, abs_floor, max_depth);
}

std::vector<double> cumulative_r(const RadialGrid& g,
                                 const std::function<double(double)>& f,
                                 double rel_tol) {
  std::vector<double> out(g.size(), 0.0);
  for (int i = 1; i < g.size(); ++i)
    out[i] = out[i - 1] + integrate(f, g.r(i - 1), g.r(i), rel_tol, 12);
  return out;
}

double log_log_slope(std::span<const double> xs, std::span<const double> ys,
                     double x_lo, double x_hi, double floor) {
  if (xs.size() != ys.size())
    throw std::invalid_argument("log_log_slope: size mismatch");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] < x_lo || xs[i] > x_hi) continue;
    const double a = std::abs(ys[i]);
    if (!(a > floor)) continue;
    const double lx = std::log(xs[i]);
    const double ly = std::log(a);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++count;
  }
  if (count < 8)
    throw std::runtime_error("log_log_slope: no decay order (window empty)");
  const double det = count * sxx - sx * sx;
  if (std::abs(det) < 1e-30)
    throw std::runtime_error("log_log_slope: degenerate window");
  return (count * sxy - sx * sy) / det;
}

double power_law_tail(double f_end, double slope, double x_end) {
  if (!(slope < -1.0))
    throw std::runtime_error("power_law_tail: tail not integrable");
  return -f_end * x_end / (slope + 1.0);
}

double measured_tail_slope(const RadialGrid& g, std::span<const double> vals,
                           double scale, bool* negligible) {
  const double r_end = g.r_max();
  if (negligible) *negligible = false;
  if (std::abs(vals.back()) <= 1e-14 * std::max(scale, 1e-300)) {
    if (negligible) *negligible = true;
    return 0.0;
  }
  const double r_lo = r_end * std::pow(10.0, -0.25);
  return log_log_slope(g.radii(), vals, r_lo, r_end * (1 + 1e-12));
}

std::vector<double> fit_power_basis(std::span<const double> x,
                                    std::span<const double> y,
                                    std::span<const double> powers) {
  const std::size_t n = x.size();
  const std::size_t m = powers.size();
  if (y.size() != n || n < m)
    throw std::invalid_argument("fit_power_basis: bad sizes");

  // columns b_j(x) = x^{p_j}, normalized for conditioning
  std::vector<std::vector<double>> cols(m, std::vector<double>(n));
  std::vector<double> norms(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      cols[j][i] = std::pow(x[i], powers[j]);
      norms[j] = std::max(norms[j], std::abs(cols[j][i]));
    }
    if (norms[j] == 0.0) norms[j] = 1.0;
    for (std::size_t i = 0; i < n; ++i) cols[j][i] /= norms[j];
  }

  // normal equations, Gaussian elimination with partial pivoting
  std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = j; k < m; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += cols[j][i] * cols[k][i];
      a[j][k] = a[k][j] = s;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += cols[j][i] * y[i];
    a[j][m] = s;
  }
  for (std::size_t j = 0; j < m; ++j) {
    std::size_t piv = j;
    for (std::size_t k = j + 1; k < m; ++k)
      if (std::abs(a[k][j]) > std::abs(a[piv][j])) piv = k;
    std::swap(a[j], a[piv]);
    if (std::abs(a[j][j]) < 1e-14)
      throw std::runtime_error("fit_power_basis: fit window too small");
    for (std::size_t k = j + 1; k < m; ++k) {
      const double w = a[k][j] / a[j][j];
      for (std::size_t l = j; l <= m; ++l) a[k][l] -= w * a[j][l];
    }
  }
  std::vector<double> scaled(m);
  for (std::size_t j = m; j-- > 0;) {
    double s = a[j][m];
    for (std::size_t k = j + 1; k < m; ++k) s -= a[j][k] * scaled[k];
    scaled[j] = s / a[j][j];
  }
  std::vector<double> coef(m);
  for (std::size_t j = 0; j < m; ++j) coef[j] = scaled[j] / norms[j];
  return coef;
}

}  // namespace ale
