#include "blowup/selfsimilar.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <boost/numeric/odeint.hpp>

#include "blowup/errors.hpp"

namespace blowup {

namespace {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 2>;

constexpr double kSeriesStart = 1e-4;
constexpr double kOdeTol = 1e-13;
constexpr double kDecayedBelow = 1e-30;
constexpr double kAgreement = 1e-6;  // bracket trajectories trusted while this close

// f - f^ell, odd in f so stray negative stage values stay finite.
double reaction(double f, double ell) { return f - std::copysign(std::pow(std::abs(f), ell), f); }

struct ProfileOde {
  int N;
  double ell;
  void operator()(const State& y, State& dy, double eta) const {
    dy[0] = y[1];
    dy[1] = -((N - 1) / eta + 0.5 * eta) * y[1] - 0.5 * (N + 2) * reaction(y[0], ell);
  }
};

double tail_shape(double eta) { return (eta * eta + 1.0) * std::exp(-0.25 * eta * eta); }

}  // namespace

ShotResult shoot(int N, double ell, double a, double eta_max) {
  if (N < 1 || !(ell > 1.0)) throw DomainError("shoot needs N >= 1, ell > 1");
  if (!(a > 0.0 && a <= 1.0)) throw DomainError("shoot needs 0 < a <= 1");
  if (!(eta_max >= 10.0)) throw DomainError("shoot needs eta_max >= 10");

  ShotResult out;
  const double h = kProfileSpacing;
  const auto samples = static_cast<std::size_t>(std::llround(eta_max / h));
  out.eta.reserve(samples + 1);
  out.eta.push_back(0.0);
  out.f.push_back(a);
  out.fp.push_back(0.0);

  const double f2 = -0.5 * (N + 2) / N * (a - std::pow(a, ell));
  State y{a + 0.5 * f2 * kSeriesStart * kSeriesStart, f2 * kSeriesStart};
  ProfileOde ode{N, ell};

  auto stepper = odeint::make_dense_output(kOdeTol, kOdeTol, odeint::runge_kutta_dopri5<State>());
  stepper.initialize(y, kSeriesStart, 1e-3);
  std::size_t next = 1;
  State s;
  while (next <= samples) {
    const double target = next * h;
    while (stepper.current_time() < target) {
      stepper.do_step(ode);
      if (!std::isfinite(stepper.current_state()[0]))
        throw NumericalFailure("profile integration produced a non-finite value");
    }
    while (next <= samples && next * h <= stepper.current_time()) {
      const double eta = next * h;
      stepper.calc_state(eta, s);
      out.eta.push_back(eta);
      out.f.push_back(s[0]);
      out.fp.push_back(s[1]);
      ++next;
      out.eta_end = eta;
      out.final_value = s[0];
      if (a == 1.0) continue;
      if (s[0] < 0.0) {
        out.kind = ShotKind::Overshoot;
        return out;
      }
      if (s[1] > 0.0) {
        out.kind = ShotKind::Undershoot;
        return out;
      }
    }
  }
  out.kind = out.final_value > kDecayedBelow ? ShotKind::Undershoot : ShotKind::Decaying;
  return out;
}

ProfileResult find_profile(int N, double ell, double tolerance, double eta_max) {
  if (!(tolerance > 0.0)) throw DomainError("find_profile needs a positive tolerance");
  double lo = 1e-12;
  double hi = 1.0;
  ShotResult over = shoot(N, ell, lo, eta_max);
  ShotResult under = shoot(N, ell, hi, eta_max);
  if (over.kind != ShotKind::Overshoot || under.kind == ShotKind::Overshoot)
    throw NotFound("no overshoot/undershoot sign change on (0, 1]");

  ProfileResult p;
  p.ell = ell;
  p.N = N;
  p.eta_max = eta_max;
  while (hi - lo >= tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    ShotResult s = shoot(N, ell, mid, eta_max);
    ++p.bisection_steps;
    if (s.kind == ShotKind::Overshoot) {
      lo = mid;
      over = std::move(s);
    } else {
      hi = mid;
      under = std::move(s);
    }
  }
  p.bracket_width = hi - lo;
  p.amplitude = 0.5 * (lo + hi);
  ShotResult mid = shoot(N, ell, p.amplitude, eta_max);

  // Trust the midpoint while both bracket trajectories still agree with it.
  const std::size_t common = std::min({over.f.size(), under.f.size(), mid.f.size()});
  std::size_t j = 1;
  while (j < common && std::abs(over.f[j] - under.f[j]) <= kAgreement * std::abs(mid.f[j])) ++j;
  --j;
  p.junction = mid.eta[j];
  if (p.junction < 4.0)
    throw NumericalFailure("profile bracket diverges before eta = 4; tighten the tolerance",
                           p.junction);

  // Tail fit ln f + eta^2/4 = ln C + p ln eta.
  p.fit_hi = p.junction;
  p.fit_lo = p.junction - 2.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i <= j; ++i) {
    if (mid.eta[i] < p.fit_lo) continue;
    const double x = std::log(mid.eta[i]);
    const double y = std::log(mid.f[i]) + 0.25 * mid.eta[i] * mid.eta[i];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  p.tail_p = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  p.tail_C = std::exp((sy - p.tail_p * sx) / n);

  // Replace the untrusted tail with (B1 eta^2 + B0) e^(-eta^2/4).
  const double ej = mid.eta[j];
  const double E = std::exp(-0.25 * ej * ej);
  const double F = mid.f[j] / E;
  const double B1 = (mid.fp[j] / E + 0.5 * ej * F) / (2.0 * ej);
  const double B0 = F - B1 * ej * ej;
  const auto samples = static_cast<std::size_t>(std::llround(eta_max / kProfileSpacing));
  p.eta.assign(mid.eta.begin(), mid.eta.begin() + j + 1);
  p.f.assign(mid.f.begin(), mid.f.begin() + j + 1);
  p.fp.assign(mid.fp.begin(), mid.fp.begin() + j + 1);
  for (std::size_t i = j + 1; i <= samples; ++i) {
    const double eta = i * kProfileSpacing;
    const double e = std::exp(-0.25 * eta * eta);
    const double poly = B1 * eta * eta + B0;
    p.eta.push_back(eta);
    p.f.push_back(poly * e);
    p.fp.push_back((2.0 * B1 * eta - 0.5 * eta * poly) * e);
  }

  p.delta_fit = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < p.eta.size(); ++i) {
    for (int q = 0; q < 4; ++q) {
      const double eta = p.eta[i] + 0.25 * q * kProfileSpacing;
      p.delta_fit = std::min(p.delta_fit, profile_value(p, eta) / tail_shape(eta));
    }
  }
  p.delta_fit = std::min(p.delta_fit, p.f.back() / tail_shape(p.eta.back()));
  return p;
}

double profile_value(const ProfileResult& p, double eta) {
  eta = std::abs(eta);
  if (p.eta.empty() || eta > p.eta.back()) return 0.0;
  const double pos = eta / kProfileSpacing;
  const auto i = std::min(static_cast<std::size_t>(pos), p.eta.size() - 2);
  const double w = (eta - p.eta[i]) / (p.eta[i + 1] - p.eta[i]);
  return (1.0 - w) * p.f[i] + w * p.f[i + 1];
}

double profile_residual(const ProfileResult& p) {
  const double h = kProfileSpacing;
  const int N = p.N;
  double worst = 0.0;
  for (std::size_t j = 2; j + 2 < p.eta.size(); ++j) {
    const double f2 = (-p.fp[j + 2] + 8.0 * p.fp[j + 1] - 8.0 * p.fp[j - 1] + p.fp[j - 2]) / (12.0 * h);
    const double eta = p.eta[j];
    const double r = f2 + ((N - 1) / eta + 0.5 * eta) * p.fp[j] + 0.5 * (N + 2) * reaction(p.f[j], p.ell);
    worst = std::max(worst, std::abs(r) / std::max(1.0, std::abs(f2)));
  }
  return worst;
}

double vss_amplitude(int N, double ell, double c) {
  if (!(c > 0.0) || !(ell > 1.0)) throw DomainError("vss amplitude needs c > 0, ell > 1");
  return std::pow((N + 2.0) / (2.0 * c), 1.0 / (ell - 1.0));
}

double vss_field(int N, double ell, double c, const ProfileResult& profile, double x, double t) {
  if (!(t > 0.0)) throw DomainError("vss field needs t > 0");
  return vss_amplitude(N, ell, c) * std::pow(t, -(1.0 + 0.5 * N)) *
         profile_value(profile, x / std::sqrt(t));
}

}  // namespace blowup
