#pragma once

#include <functional>

namespace blowup::quad {

// An integral carried in log space so that e^(-1/t)-type integrands near
// t = 0 neither underflow nor lose relative accuracy.
struct LogIntegral {
  double log_value = 0.0;  // ln of the integral; -inf for an exact zero
  double rel_error = 0.0;  // estimated relative error
  int panels = 0;
};

// ln(e^a + e^b) without overflow.
double log_add(double a, double b);

// ln int_a^b exp(log_f(s)) ds, 0 < a < b, adaptive Gauss-Kronrod.
LogIntegral log_integral(const std::function<double(double)>& log_f, double a, double b,
                         double rel_tol = 1e-10);

// ln int_0^r exp(log_f(s)) ds over geometric panels [2^-(j+1) r, 2^-j r].
// Stops once a panel contributes less than 1e-16 of the running total.
// Throws NumericalFailure (with best estimate) if the panels never decay.
LogIntegral log_integral_from_zero(const std::function<double(double)>& log_f, double r,
                                   double rel_tol = 1e-10);

}  // namespace blowup::quad
