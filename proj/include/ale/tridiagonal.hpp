#pragma once

#include <stdexcept>
#include <vector>

namespace ale {

// Thomas algorithm. lower[0] and upper[n-1] are ignored. Overwrites rhs
// with the solution.
inline void solve_tridiagonal(std::vector<double>& lower,
                              std::vector<double>& diag,
                              std::vector<double>& upper,
                              std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n || rhs.size() != n)
    throw std::invalid_argument("solve_tridiagonal: size mismatch");
  for (std::size_t i = 1; i < n; ++i) {
    const double w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;)
    rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}

}  // namespace ale
