#pragma once

#include <Eigen/Dense>
#include <vector>

namespace ale {

// A real (1,1)-form at a point, written in a unitary frame where the
// background Kahler form is the identity matrix. Norm convention for a
// form with relative eigenvalues lambda_i: |zeta|^2 = 2 sum lambda_i^2.
class HermitianForm {
 public:
  using Matrix = Eigen::MatrixXcd;

  explicit HermitianForm(Matrix entries, double hermiticity_tol = 1e-10);

  int dimension() const { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }

 private:
  Matrix entries_;
};

// Real eigenvalues relative to the background form, descending. Verifies the
// spectral reconstruction before returning.
std::vector<double> omega_eigenvalues(const HermitianForm& z);

// zeta^k wedge omega^{m-k} / omega^m = e_k(lambda) / C(m,k).
double wedge_power_ratio(const HermitianForm& z, int k);

// Residual of trace(zeta) = -laplacian for zeta = i d dbar-type Hessians:
// |e_1(lambda) + laplacian_value|.
double trace_identity_residual(const HermitianForm& z, double laplacian_value);

// For trace-free zeta: residual of
//   zeta^2 wedge omega^{m-2} / omega^m = -|zeta|^2 / (2 m (m-1)).
// Throws if the trace-free hypothesis fails beyond tolerance.
double primitive_square_identity_residual(const HermitianForm& z,
                                          double trace_tol = 1e-10);

bool is_positive(const HermitianForm& z);

// |zeta|^2 = 2 sum lambda_i^2
double form_norm_squared(const HermitianForm& z);

}  // namespace ale
