#pragma once

// Node-wise kernels of the splitting scheme. Each exists as a plain loop
// (serial::, the reference) and an OpenMP loop (parallel::). They touch one
// node at a time, so both produce bit-identical results.

#include <cmath>
#include <cstddef>
#include <span>

#include "blowup/quadrature.hpp"

namespace blowup::pointwise {

enum class Exec { Serial, Parallel };

// Below this many nodes the OpenMP variants run on the calling thread.
inline constexpr std::size_t kParallelThreshold = 4096;

// Exact flow of u' = -h(t) u^q across a substep with ln(int h) = log_dh:
// u <- u (1 + (q-1) dH u^(q-1))^(-1/(q-1)).
inline double power_flow(double u, double log_dh, double q) {
  if (!(u > 0.0) || (std::isinf(log_dh) && log_dh < 0.0)) return u;
  const double z = std::log(q - 1.0) + log_dh + (q - 1.0) * std::log(u);
  // log1p(e^z) without overflow.
  const double l = z > 30.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
  return u * std::exp(-l / (q - 1.0));
}

// Exact flow of u' = -h(t) e^u: e^-u <- e^-u + dH.
inline double exponential_flow(double u, double log_dh) {
  if (std::isinf(log_dh) && log_dh < 0.0) return u;
  return -quad::log_add(-u, log_dh);
}

// Implicit Euler for v' = -C'(t) (v^ell + 1) over a substep with
// int C' = dc, stopped at zero: solves w + dc (w^ell + 1) = v for w >= 0.
// Returns Newton iterations used.
inline int auxiliary_implicit(double& v, double dc, double ell) {
  if (!(dc > 0.0)) return 0;
  if (v <= dc) {
    v = 0.0;
    return 0;
  }
  // g(w) = w + dc (w^ell + 1) - v is increasing and convex with g(v) > 0,
  // so Newton from w = v decreases monotonically to the root.
  double w = v;
  int it = 0;
  for (; it < 100; ++it) {
    const double wl = std::pow(w, ell);
    const double g = w + dc * (wl + 1.0) - v;
    const double dg = 1.0 + dc * ell * wl / w;
    const double step = g / dg;
    w -= step;
    if (w <= 0.0) {
      w = 0.0;
      break;
    }
    if (std::abs(step) <= 1e-15 * w) break;
  }
  v = w;
  return it + 1;
}

namespace serial {
void absorb_power(std::span<double> u, double log_dh, double q);
void absorb_exponential(std::span<double> u, double log_dh);
long absorb_auxiliary(std::span<double> u, double dc, double ell);
// phi = |u|^(m-1) u and dphi = m (|u| + eps)^(m-1).
void porous_mobility(std::span<const double> u, std::span<double> phi, std::span<double> dphi,
                     double m, double eps);
}  // namespace serial

namespace parallel {
void absorb_power(std::span<double> u, double log_dh, double q);
void absorb_exponential(std::span<double> u, double log_dh);
long absorb_auxiliary(std::span<double> u, double dc, double ell);
void porous_mobility(std::span<const double> u, std::span<double> phi, std::span<double> dphi,
                     double m, double eps);
}  // namespace parallel

inline void absorb_power(Exec e, std::span<double> u, double log_dh, double q) {
  e == Exec::Parallel ? parallel::absorb_power(u, log_dh, q) : serial::absorb_power(u, log_dh, q);
}
inline void absorb_exponential(Exec e, std::span<double> u, double log_dh) {
  e == Exec::Parallel ? parallel::absorb_exponential(u, log_dh)
                      : serial::absorb_exponential(u, log_dh);
}
inline long absorb_auxiliary(Exec e, std::span<double> u, double dc, double ell) {
  return e == Exec::Parallel ? parallel::absorb_auxiliary(u, dc, ell)
                             : serial::absorb_auxiliary(u, dc, ell);
}
inline void porous_mobility(Exec e, std::span<const double> u, std::span<double> phi,
                            std::span<double> dphi, double m, double eps) {
  e == Exec::Parallel ? parallel::porous_mobility(u, phi, dphi, m, eps)
                      : serial::porous_mobility(u, phi, dphi, m, eps);
}

}  // namespace blowup::pointwise
