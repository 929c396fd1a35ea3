#include "blowup/parallel/pointwise.hpp"

#include <cstdint>

namespace blowup::pointwise {

namespace {
inline void mobility(double u, double& phi, double& dphi, double m, double eps) {
  const double a = std::abs(u);
  phi = std::pow(a, m - 1.0) * u;
  dphi = m * std::pow(a + eps, m - 1.0);
}
}  // namespace

namespace serial {

void absorb_power(std::span<double> u, double log_dh, double q) {
  for (double& x : u) x = power_flow(x, log_dh, q);
}

void absorb_exponential(std::span<double> u, double log_dh) {
  for (double& x : u) x = exponential_flow(x, log_dh);
}

long absorb_auxiliary(std::span<double> u, double dc, double ell) {
  long iters = 0;
  for (double& x : u) iters += auxiliary_implicit(x, dc, ell);
  return iters;
}

void porous_mobility(std::span<const double> u, std::span<double> phi, std::span<double> dphi,
                     double m, double eps) {
  for (std::size_t j = 0; j < u.size(); ++j) mobility(u[j], phi[j], dphi[j], m, eps);
}

}  // namespace serial

namespace parallel {

void absorb_power(std::span<double> u, double log_dh, double q) {
  const std::int64_t n = static_cast<std::int64_t>(u.size());
  double* p = u.data();
#pragma omp parallel for schedule(static) if (u.size() >= kParallelThreshold)
  for (std::int64_t j = 0; j < n; ++j) p[j] = power_flow(p[j], log_dh, q);
}

void absorb_exponential(std::span<double> u, double log_dh) {
  const std::int64_t n = static_cast<std::int64_t>(u.size());
  double* p = u.data();
#pragma omp parallel for schedule(static) if (u.size() >= kParallelThreshold)
  for (std::int64_t j = 0; j < n; ++j) p[j] = exponential_flow(p[j], log_dh);
}

long absorb_auxiliary(std::span<double> u, double dc, double ell) {
  const std::int64_t n = static_cast<std::int64_t>(u.size());
  double* p = u.data();
  long iters = 0;
#pragma omp parallel for schedule(static) reduction(+ : iters) if (u.size() >= kParallelThreshold)
  for (std::int64_t j = 0; j < n; ++j) iters += auxiliary_implicit(p[j], dc, ell);
  return iters;
}

void porous_mobility(std::span<const double> u, std::span<double> phi, std::span<double> dphi,
                     double m, double eps) {
  const std::int64_t n = static_cast<std::int64_t>(u.size());
#pragma omp parallel for schedule(static) if (u.size() >= kParallelThreshold)
  for (std::int64_t j = 0; j < n; ++j) mobility(u[j], phi[j], dphi[j], m, eps);
}

}  // namespace parallel

}  // namespace blowup::pointwise
