#include "blowup/energy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "blowup/errors.hpp"
#include "blowup/grid.hpp"

namespace blowup {

namespace {

// Trapezoid of piecewise-linear g(x) over [a, b] ∩ [x_0, x_n].
double integrate_linear(std::span<const double> x, std::span<const double> g, double a, double b) {
  a = std::max(a, x.front());
  b = std::min(b, x.back());
  if (!(b > a)) return 0.0;
  auto value_at = [&](std::size_t i, double s) {
    const double w = (s - x[i]) / (x[i + 1] - x[i]);
    return (1.0 - w) * g[i] + w * g[i + 1];
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double lo = std::max(a, x[i]);
    const double hi = std::min(b, x[i + 1]);
    if (!(hi > lo)) continue;
    total += 0.5 * (hi - lo) * (value_at(i, lo) + value_at(i, hi));
  }
  return total;
}

std::vector<double> shell_weights(const RadialGrid& grid) {
  const auto r = grid.nodes();
  const int N = grid.dimension();
  std::vector<double> w(r.size());
  for (std::size_t j = 0; j < r.size(); ++j) w[j] = sphere_area(N) * std::pow(r[j], N - 1);
  return w;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

MuSpec MuSpec::constant(double mu) { return MuSpec(false, mu, 0.0); }
MuSpec MuSpec::linear(double slope, double offset) { return MuSpec(true, slope, offset); }

double MuSpec::operator()(double tau) const { return linear_ ? a_ * (tau - b_) : a_; }

std::string MuSpec::describe() const {
  return linear_ ? "linear:slope=" + fmt(a_) + ",offset=" + fmt(b_) : "constant:mu=" + fmt(a_);
}

std::vector<double> radial_gradient(const RadialGrid& grid, std::span<const double> u) {
  const auto r = grid.nodes();
  const std::size_t n = r.size();
  std::vector<double> g(n, 0.0);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    // Three-point derivative on a nonuniform grid.
    const double hl = r[j] - r[j - 1];
    const double hr = r[j + 1] - r[j];
    g[j] = (hl * hl * (u[j + 1] - u[j]) + hr * hr * (u[j] - u[j - 1])) / (hl * hr * (hl + hr));
  }
  g[n - 1] = (u[n - 1] - u[n - 2]) / (r[n - 1] - r[n - 2]);
  return g;
}

double exterior_l2(const RadialGrid& grid, std::span<const double> u, double tau, double cutoff) {
  const auto w = shell_weights(grid);
  std::vector<double> g(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) g[j] = w[j] * u[j] * u[j];
  return integrate_linear(grid.nodes(), g, tau, cutoff);
}

EnergyReport energy_report(const SolveResult& result, double r, double tau, const MuSpec& mu_spec,
                           double radius_cutoff) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("energy report needs r in (0, 1)");
  if (!(tau >= 0.0)) throw DomainError("energy report needs tau >= 0");
  const auto& times = result.times;
  if (times.empty() || times.back() < 1.0 - 1e-12)
    throw DomainError("energy report needs a run reaching t = 1");
  if (!(r > times.front())) throw DomainError("energy report needs r after the first stored time");
  const auto inside = std::count_if(times.begin(), times.end(), [&](double t) { return t > r && t < 1.0; });
  if (inside < kMinEnergySnapshots)
    throw InsufficientData("fewer than " + std::to_string(kMinEnergySnapshots) +
                           " snapshots in (r, 1)");

  const ProblemSpec& spec = result.spec;
  const auto q = spec.absorption_exponent();
  if (!q) throw WrongVariant("energy functionals need a power-type absorption");

  EnergyReport rep;
  rep.r = r;
  rep.tau = tau;
  rep.mu = mu_spec(tau);
  rep.mu_description = mu_spec.describe();
  rep.radius_cutoff = std::min(radius_cutoff, result.grid.radius());
  rep.H_r = spec.kernel.H(r);
  const double mu2 = rep.mu * rep.mu;
  const double cut = rep.radius_cutoff;

  const auto nodes = result.grid.nodes();
  const auto w = shell_weights(result.grid);
  const std::size_t snaps = times.size();
  std::vector<double> grad2(snaps), l2(snaps), absorb(snaps), grad2_ext(snaps), l2_ext(snaps);
  std::vector<double> g(nodes.size());
  for (std::size_t i = 0; i < snaps; ++i) {
    const auto& u = result.fields[i];
    const auto du = radial_gradient(result.grid, u);
    for (std::size_t j = 0; j < g.size(); ++j) g[j] = w[j] * du[j] * du[j];
    grad2[i] = integrate_linear(nodes, g, 0.0, cut);
    grad2_ext[i] = integrate_linear(nodes, g, tau, cut);
    l2[i] = exterior_l2(result.grid, u, 0.0, cut);
    l2_ext[i] = exterior_l2(result.grid, u, tau, cut);
    const double h = spec.kernel.h(times[i]);
    for (std::size_t j = 0; j < g.size(); ++j)
      g[j] = h == 0.0 ? 0.0 : w[j] * h * std::pow(std::abs(u[j]), *q + 1.0);
    absorb[i] = integrate_linear(nodes, g, 0.0, cut);
  }

  rep.I1 = integrate_linear(times, grad2, r, 1.0);
  rep.I2 = integrate_linear(times, l2, r, 1.0);
  rep.I3 = integrate_linear(times, absorb, r, 1.0);

  std::vector<double> e1(snaps), fw(snaps);
  for (std::size_t i = 0; i < snaps; ++i) {
    const double damp = std::exp(-mu2 * times[i]);
    e1[i] = (grad2_ext[i] + mu2 * l2_ext[i]) * damp;
    fw[i] = l2_ext[i] * damp;
  }
  rep.E1_mu = integrate_linear(times, e1, 0.0, r);
  rep.E2 = integrate_linear(times, l2_ext, 0.0, r);

  rep.f_mu = 0.0;
  for (std::size_t i = 0; i < snaps && times[i] <= r; ++i) rep.f_mu = std::max(rep.f_mu, fw[i]);
  // value at t = r itself
  const auto it = std::upper_bound(times.begin(), times.end(), r);
  if (it != times.end() && it != times.begin()) {
    const std::size_t i = static_cast<std::size_t>(it - times.begin()) - 1;
    const double wt = (r - times[i]) / (times[i + 1] - times[i]);
    rep.f_mu = std::max(rep.f_mu, (1.0 - wt) * fw[i] + wt * fw[i + 1]);
  }
  return rep;
}

// ---------------------------------------------------------------- schedule

void ScheduleParams::validate() const {
  if (!(eps0 > 0.0 && eps0 < std::exp(-1.0))) throw ConfigError("eps0 must lie in (0, 1/e)");
  for (double c : {c2, c4, c8, c9, c10})
    if (!(c > 0.0)) throw ConfigError("schedule constants must be positive");
  if (!(q > 1.0)) throw ConfigError("schedule needs q > 1");
  if (N < 1) throw ConfigError("schedule needs N >= 1");
  if (k_min < 1 || k_max < k_min) throw ConfigError("schedule needs 1 <= k_min <= k_max");
  if (n < 1 || n > k_max) throw ConfigError("schedule needs 1 <= n <= k_max");
}

double tau_from_r(const ScheduleParams& p, int k, double r) {
  if (!(r > 0.0)) throw DomainError("r_k must be positive");
  const double inner = (1.0 - p.eps0) * std::exp(static_cast<double>(k)) + std::log(p.c2 / r);
  if (!(inner >= 0.0)) throw DomainError("tau_k undefined: negative radicand");
  return 8.0 * std::sqrt(r * inner);
}

double solve_b(const ScheduleParams& p, int k) {
  const double ek = std::exp(static_cast<double>(k));
  // ln LHS - ln RHS as a function of s = ln b.
  auto F = [&](double s) {
    const double b = std::exp(s);
    const double w = p.omega(b);
    const double inner = b * ((1.0 - p.eps0) * ek + std::log(p.c2 / b));
    const double root = inner > 0.0 ? std::sqrt(inner) : 0.0;
    return std::log(p.c4) + p.N * std::log(root + 1.0 / k) +
           2.0 / (p.q - 1.0) * (std::log(w) + w / b - 2.0 * s) - std::log(2.0) - p.eps0 * ek;
  };
  // F is large and positive as b -> 0 and falls off for large b. Walk from
  // b = 1 in steps of e until the sign changes; for small k the root can
  // sit above 1.
  double lo = 0.0, hi = 0.0;
  double f0 = F(0.0);
  if (std::isnan(f0)) throw NotFound("b_k relation undefined at b = 1 for k = " + std::to_string(k));
  if (f0 < 0.0) {
    double f_lo = f0;
    while (f_lo < 0.0) {
      hi = lo;
      lo -= 1.0;
      if (lo < -700.0) throw NotFound("b_k relation: no bracket above 1e-304 for k = " + std::to_string(k));
      f_lo = F(lo);
      if (std::isnan(f_lo)) throw NotFound("b_k relation undefined for k = " + std::to_string(k));
    }
  } else {
    double f_hi = f0;
    while (f_hi >= 0.0) {
      lo = hi;
      hi += 1.0;
      f_hi = F(hi);
      if (hi > 700.0 || std::isnan(f_hi)) throw NotFound("b_k relation: no sign change for k = " + std::to_string(k));
    }
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (F(mid) >= 0.0) lo = mid;
    else hi = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

std::vector<ScheduleRow> schedule(const ScheduleParams& p, const std::optional<std::vector<double>>& r_values) {
  p.validate();
  const std::size_t count = static_cast<std::size_t>(p.k_max - p.k_min + 1);
  if (r_values && r_values->size() != count)
    throw ConfigError("need one r_k per k in [k_min, k_max]");

  auto sqrt_omega_over_s = [&](double s_log) { return std::sqrt(p.omega(std::exp(s_log))); };
  auto bound_at = [&](int j) { return p.c8 * std::sqrt(p.omega(p.c9 * std::exp(-static_cast<double>(j)))); };

  std::vector<ScheduleRow> rows;
  double tau_sum = 0.0;
  double bound_sum = 0.0;
  // Partial sums start at j = n; terms below k_min need r_j too, so the
  // tau sums only include rows that are computed.
  for (int j = p.n; j < p.k_min; ++j) bound_sum += bound_at(j);
  for (int k = p.k_min; k <= p.k_max; ++k) {
    ScheduleRow row;
    row.k = k;
    row.log_M = std::exp(static_cast<double>(k));
    if (row.log_M < 709.0) row.M = std::exp(row.log_M);
    row.r_k = r_values ? (*r_values)[static_cast<std::size_t>(k - p.k_min)] : solve_b(p, k);
    row.tau_k = tau_from_r(p, k, row.r_k);
    row.bound = bound_at(k);
    row.tau_within_bound = row.tau_k <= row.bound;
    if (k >= p.n) {
      tau_sum += row.tau_k;
      bound_sum += row.bound;
    }
    row.tau_partial = tau_sum;
    row.bound_partial = bound_sum;
    const double a = std::log(p.c9) - k;
    const double b = std::log(p.c9) - p.n;
    row.integral = b > a ? p.c10 * boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
                                      sqrt_omega_over_s, a, b, 15, 1e-12)
                         : 0.0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace blowup
