#pragma once

// Local energy functionals of a stored solution and the bookkeeping
// sequences (M_k, tau_k, ...) of the energy estimate.
//
//   I1(r) = int_r^1 int |grad u|^2,  I2(r) = int_r^1 int u^2,
//   I3(r) = int_r^1 int h |u|^(q+1)
//   E1(r, tau) = int_0^r int_{|x|>tau} (|grad u|^2 + mu^2 u^2) e^(-mu^2 t)
//   E2(r, tau) = int_0^r int_{|x|>tau} u^2
//   f_mu(r, tau) = sup_{t <= r} e^(-mu^2 t) int_{|x|>tau} u^2(x, t)
//
// Time integrals use the stored snapshots (trapezoid, linear interpolation
// at t = r); the lower limit 0 is the first stored time. mu = mu(tau) is a
// single number per report.

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "blowup/kernels.hpp"
#include "blowup/rdsolver.hpp"

namespace blowup {

class MuSpec {
 public:
  static MuSpec constant(double mu);
  // mu(tau) = slope * (tau - offset)
  static MuSpec linear(double slope, double offset);

  double operator()(double tau) const;
  std::string describe() const;

 private:
  MuSpec(bool linear, double a, double b) : linear_(linear), a_(a), b_(b) {}
  bool linear_;
  double a_;
  double b_;
};

struct EnergyReport {
  double r = 0.0;
  double tau = 0.0;
  double I1 = 0.0, I2 = 0.0, I3 = 0.0;
  double f_mu = 0.0;
  double E1_mu = 0.0;
  double E2 = 0.0;
  double H_r = 0.0;  // int_0^r h
  double mu = 0.0;
  std::string mu_description;
  double radius_cutoff = 0.0;
};

inline constexpr int kMinEnergySnapshots = 8;

// Spatial integrals stop at radius_cutoff (default: the whole grid).
EnergyReport energy_report(const SolveResult& result, double r, double tau, const MuSpec& mu,
                           double radius_cutoff = std::numeric_limits<double>::infinity());

// Building blocks, exposed for tests.
// int_{tau < |x| < cutoff} u^2 dx with the integrand interpolated at tau.
double exterior_l2(const RadialGrid& grid, std::span<const double> u, double tau,
                   double cutoff = std::numeric_limits<double>::infinity());
// Radial derivative: centred inside, 0 at the origin, one-sided at R.
std::vector<double> radial_gradient(const RadialGrid& grid, std::span<const double> u);

struct ScheduleParams {
  double eps0 = 0.1;  // in (0, 1/e)
  double c2 = 1.0, c4 = 1.0, c8 = 1.0, c9 = 1.0, c10 = 1.0;
  double q = 2.0;  // exponent entering the b_k relation
  int N = 1;
  int k_min = 1;
  int k_max = 20;
  int n = 1;  // partial sums run over j = n..k
  OmegaSpec omega = OmegaSpec::constant(1.0);

  void validate() const;
};

struct ScheduleRow {
  int k = 0;
  double log_M = 0.0;                 // e^k
  std::optional<double> M;            // e^(e^k), empty when it overflows
  double r_k = 0.0;
  double tau_k = 0.0;                 // 8 sqrt(r_k ((1-eps0) e^k + ln(c2/r_k)))
  double bound = 0.0;                 // c8 sqrt(omega(c9 e^-k))
  bool tau_within_bound = false;
  double tau_partial = 0.0;           // sum_{j=n..k} tau_j
  double bound_partial = 0.0;         // sum_{j=n..k} bound_j
  double integral = 0.0;              // c10 int_{c9 e^-k}^{c9 e^-n} sqrt(omega(s)) / s ds
};

// r_k from `r_values` (one per k) or, if absent, from the bound-mode proxy
// b_k solving
//   c4 (sqrt(b((1-eps0) e^k + ln(c2/b))) + 1/k)^N (omega(b) e^(omega(b)/b) / b^2)^(2/(q-1))
//     = 2 e^(eps0 e^k).
std::vector<ScheduleRow> schedule(const ScheduleParams& params,
                                  const std::optional<std::vector<double>>& r_values = std::nullopt);

// The b_k of the relation above; throws NotFound if no bracket is found.
double solve_b(const ScheduleParams& params, int k);

double tau_from_r(const ScheduleParams& params, int k, double r);

}  // namespace blowup
