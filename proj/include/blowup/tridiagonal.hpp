#pragma once

#include <span>
#include <vector>

namespace blowup {

// Thomas algorithm for a_i x_{i-1} + b_i x_i + c_i x_{i+1} = d_i.
// `lower[0]` and `upper[n-1]` are ignored. The system must be diagonally
// dominant (every matrix assembled here is an M-matrix). Solves in place.
void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs,
                       std::vector<double>& scratch);

}  // namespace blowup
