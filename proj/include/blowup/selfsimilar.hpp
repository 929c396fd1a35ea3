#pragma once

// Self-similar profiles of v_t - Lap v + c t^alpha v^ell = 0:
//   v(x, t) = A t^-(1+N/2) f(|x| / sqrt t),  A = ((N+2) / (2c))^(1/(ell-1)),
// with f solving
//   f'' + ((N-1)/eta + eta/2) f' + (N+2)/2 (f - f^ell) = 0,  f'(0) = 0,
// and decaying like eta^2 e^(-eta^2/4).

#include <vector>

namespace blowup {

enum class ShotKind { Overshoot, Undershoot, Decaying };

struct ShotResult {
  ShotKind kind = ShotKind::Decaying;
  double final_value = 0.0;  // f at the last sample reached
  double eta_end = 0.0;      // where the classification was made
  std::vector<double> eta, f, fp;
};

// Sample spacing of trajectories and profiles.
inline constexpr double kProfileSpacing = 0.01;

// Integrates from f(0) = a, f'(0) = 0. Overshoot: f crosses 0.
// Undershoot: f' turns positive, or f is still above 1e-30 at eta_max.
ShotResult shoot(int N, double ell, double a, double eta_max = 20.0);

struct ProfileResult {
  double ell = 0.0;
  int N = 0;
  double amplitude = 0.0;  // a* = f(0)
  double eta_max = 0.0;
  std::vector<double> eta, f, fp;
  // Least-squares fit f ~ C eta^p e^(-eta^2/4) on [fit_lo, fit_hi].
  double tail_C = 0.0;
  double tail_p = 0.0;
  double fit_lo = 0.0;
  double fit_hi = 0.0;
  // Beyond fit_hi the shot is replaced by (B1 eta^2 + B0) e^(-eta^2/4),
  // matched in value and slope; the bisection midpoint is not trustworthy
  // there.
  double junction = 0.0;
  double delta_fit = 0.0;  // inf f / ((eta^2 + 1) e^(-eta^2/4))
  double bracket_width = 0.0;
  int bisection_steps = 0;
};

ProfileResult find_profile(int N, double ell, double tolerance = 1e-12, double eta_max = 20.0);

// Linear interpolation of the samples, 0 beyond eta_max.
double profile_value(const ProfileResult& p, double eta);

// max_j |residual_j| / max(1, |f''_j|) with f'' from fourth-order differences
// of the sampled slope.
double profile_residual(const ProfileResult& p);

double vss_amplitude(int N, double ell, double c);

double vss_field(int N, double ell, double c, const ProfileResult& profile, double x, double t);

}  // namespace blowup
