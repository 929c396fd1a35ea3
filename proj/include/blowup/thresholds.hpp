#pragma once

// Dini-type threshold integrals, the porous exponent theta, and the explicit
// constants of the subsolution construction for the exponential equation.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "blowup/kernels.hpp"

namespace blowup {

enum class DiniClass { Finite, Divergent, Undecided };

std::string to_string(DiniClass c);

struct DiniResult {
  DiniClass cls = DiniClass::Undecided;
  std::optional<double> value;     // closed form, or partial sum + geometric tail
  bool analytic = false;           // exact classification from the family
  std::vector<double> cutoffs;     // eps_j actually used (numeric route)
  std::vector<double> partials;    // int_{eps_j}^1 omega^e / t dt
};

// eps_j = 2^-j, j = 1..count.
std::vector<double> geometric_cutoffs(int count = 40, double ratio = 0.5);

// Classifies int_0^1 omega(t)^exponent dt / t.
DiniResult dini_classify(const OmegaSpec& omega, double exponent,
                         const std::vector<double>& cutoffs = geometric_cutoffs());

// Numerical route only, for any positive integrand g on (0, 1]: partials of
// int_{eps_j}^1 g, classified by the trend of the last four increments.
DiniResult classify_improper_integral(const std::function<double(double)>& g,
                                      const std::vector<double>& cutoffs);

// Existence probe for porous fundamental solutions: the integrability of
// h(t) t^(-(q-1)/(m-1+2/N)) near 0, exposed as printed.
DiniResult porous_admissibility_probe(const AbsorptionKernel& kernel, double m, double q, int N,
                                      const std::vector<double>& cutoffs = geometric_cutoffs());

// theta = (m^2-1) / ((N(m-1) + 2(m+1)) (q-1)), for q > m > 1.
double theta_exponent(double m, double q, int N);

// alpha_ell = (ell-1)(N+2)/2 - 1: the time weight making the self-similar
// ansatz t^-(1+N/2) f(x/sqrt t) close for dv/dt - Lap v + c t^alpha v^ell = 0.
double alpha_ell(int N, double ell);

// ell* = (N+4)/(N+2), where alpha_ell vanishes.
double ell_star(int N);

// c = sigma * exp((1-ell) sigma/tau - (ell(N+2)-N)/2 * ln tau).
double lemma1_constant(double sigma, double tau, double ell, int N);
double lemma1_log_constant(double sigma, double tau, double ell, int N);

// Analytic threshold: the scan holds for tau <= beta*sigma,
// beta = (ell-1)/(alpha_ell+2).
double lemma1_beta_closed_form(double ell, int N);

struct ScanGrid {
  int time_nodes = 2000;  // log-spaced on [tau 10^-decades, tau]
  double decades = 4.0;
  int rho_nodes = 64;     // linear on [0, Utilde(t)]
  bool boundary_row_only = false;  // scan only rho = Utilde(t)
};

struct SubsolutionScan {
  bool holds = true;
  double c = 0.0;
  // First failing (t, rho) in scan order when !holds.
  std::optional<double> witness_t;
  std::optional<double> witness_rho;
  double worst_log_margin = 0.0;  // min over grid of ln(lhs) - ln(rhs)
  int points = 0;
};

// Checks c t^alpha (rho^ell + 1) >= h(t) e^rho on the grid, with h the
// lemma1 kernel and rho in [0, Utilde(t)], relative slack 1e-12.
SubsolutionScan verify_subsolution_inequality(double sigma, double tau, double ell, int N,
                                              const ScanGrid& grid = {});

struct BetaSearch {
  double beta = 0.0;
  double tau_star = 0.0;
  int scans = 0;
};

// Largest tau in [tau_lo, tau_hi] (bisection to rel_tol) whose scan holds;
// beta = tau*/sigma. Default bracket [1e-4 sigma, 10 sigma].
BetaSearch find_beta(double sigma, double ell, int N, std::optional<double> tau_lo = std::nullopt,
                     std::optional<double> tau_hi = std::nullopt, const ScanGrid& grid = {},
                     double rel_tol = 1e-6);

}  // namespace blowup
