#include "ale/hermitian_form.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ale {

HermitianForm::HermitianForm(Matrix entries, double hermiticity_tol)
    : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() < 1)
    throw std::invalid_argument("HermitianForm: square matrix required");
  const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
  const double dev = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (dev > hermiticity_tol * scale)
    throw std::invalid_argument("HermitianForm: matrix is not Hermitian");
  // symmetrize the representation so downstream algebra sees an exact
  // Hermitian matrix
  entries_ = 0.5 * (entries_ + entries_.adjoint().eval());
}

std::vector<double> omega_eigenvalues(const HermitianForm& z) {
  Eigen::SelfAdjointEigenSolver<HermitianForm::Matrix> es(z.entries());
  if (es.info() != Eigen::Success)
    throw std::runtime_error("omega_eigenvalues: eigensolver failed");
  const double scale = std::max(1.0, z.entries().cwiseAbs().maxCoeff());
  const HermitianForm::Matrix rec = es.eigenvectors() *
                                    es.eigenvalues().asDiagonal() *
                                    es.eigenvectors().adjoint();
  if ((rec - z.entries()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::runtime_error("omega_eigenvalues: reconstruction residual");
  std::vector<double> lam(es.eigenvalues().data(),
                          es.eigenvalues().data() + z.dimension());
  std::sort(lam.begin(), lam.end(), std::greater<double>());
  return lam;
}

namespace {

// e_0..e_m from the eigenvalues via the product recurrence
std::vector<double> elementary_symmetric(const std::vector<double>& lam) {
  std::vector<double> e(lam.size() + 1, 0.0);
  e[0] = 1.0;
  for (double l : lam)
    for (std::size_t j = e.size() - 1; j >= 1; --j) e[j] += l * e[j - 1];
  return e;
}

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 0; i < k; ++i) b = b * (n - i) / (i + 1);
  return b;
}

}  // namespace

double wedge_power_ratio(const HermitianForm& z, int k) {
  const int m = z.dimension();
  if (k < 0 || k > m)
    throw std::invalid_argument("wedge_power_ratio: need 0 <= k <= m");
  if (k == 0) return 1.0;
  const auto lam = omega_eigenvalues(z);
  const auto e = elementary_symmetric(lam);
  return e[k] / binomial(m, k);
}

double trace_identity_residual(const HermitianForm& z,
                               double laplacian_value) {
  const auto lam = omega_eigenvalues(z);
  double e1 = 0.0;
  for (double l : lam) e1 += l;
  return std::abs(e1 + laplacian_value);
}

double primitive_square_identity_residual(const HermitianForm& z,
                                          double trace_tol) {
  const int m = z.dimension();
  if (m < 2)
    throw std::invalid_argument(
        "primitive_square_identity_residual: m >= 2 required");
  const auto lam = omega_eigenvalues(z);
  double e1 = 0.0, p2 = 0.0;
  for (double l : lam) {
    e1 += l;
    p2 += l * l;
  }
  const double scale = std::max(1.0, std::sqrt(p2));
  if (std::abs(e1) > trace_tol * scale)
    throw std::invalid_argument(
        "primitive_square_identity_residual: nonzero trace (the primitive "
        "hypothesis is violated)");
  const double ratio = wedge_power_ratio(z, 2);
  const double norm_sq = 2.0 * p2;
  return std::abs(ratio + norm_sq / (2.0 * m * (m - 1)));
}

bool is_positive(const HermitianForm& z) {
  const auto lam = omega_eigenvalues(z);
  return lam.back() > 0.0;
}

double form_norm_squared(const HermitianForm& z) {
  const auto lam = omega_eigenvalues(z);
  double p2 = 0.0;
  for (double l : lam) p2 += l * l;
  return 2.0 * p2;
}

}  // namespace ale
