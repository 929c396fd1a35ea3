#include "blowup/tridiagonal.hpp"

#include "blowup/errors.hpp"

namespace blowup {

void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs,
                       std::vector<double>& scratch) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n || rhs.size() != n)
    throw DomainError("tridiagonal: size mismatch");
  scratch.resize(n);
  double denom = diag[0];
  if (denom == 0.0) throw NumericalFailure("tridiagonal: zero pivot");
  scratch[0] = upper[0] / denom;
  rhs[0] /= denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = diag[i] - lower[i] * scratch[i - 1];
    if (denom == 0.0) throw NumericalFailure("tridiagonal: zero pivot");
    scratch[i] = i + 1 < n ? upper[i] / denom : 0.0;
    rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= scratch[i] * rhs[i + 1];
}

}  // namespace blowup
