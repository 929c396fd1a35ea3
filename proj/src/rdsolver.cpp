#include "blowup/rdsolver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>

#include "blowup/errors.hpp"
#include "blowup/thresholds.hpp"
#include "blowup/tridiagonal.hpp"

namespace blowup {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kSupersolutionRel = 1e-6;  // power / porous: u <= U (1 + 1e-6)
constexpr double kSupersolutionAbs = 1e-6;  // exponential: u <= Utilde + 1e-6
constexpr int kMaxConsecutiveFailures = 40;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

bool same_time(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

// Flat bound from a running ln H; mirrors eval_U / eval_Utilde.
FlatBound bound_from_log_H(const ProblemSpec& spec, double log_H) {
  if (std::holds_alternative<AuxiliaryAbsorption>(spec.nonlinearity)) return FlatBound::inf();
  if (log_H == kNegInf) return FlatBound::inf();
  if (spec.is_exponential()) return FlatBound::finite(-log_H);
  const double q = *spec.absorption_exponent();
  const double lu = -(std::log(q - 1.0) + log_H) / (q - 1.0);
  if (lu >= std::log(std::numeric_limits<double>::max())) return FlatBound::inf();
  return FlatBound::finite(std::exp(lu));
}

bool violates(const ProblemSpec& spec, const FlatBound& bound, double u) {
  if (spec.is_exponential()) return bound.exceeded_by(u, 0.0, kSupersolutionAbs);
  return bound.exceeded_by(u, kSupersolutionRel, 0.0);
}

// One Strang step: half absorption, diffusion, half absorption.
class Stepper {
 public:
  Stepper(const ProblemSpec& spec, const RadialGrid& grid, const SolveOptions& opts)
      : spec_(spec), grid_(grid), opts_(opts), n_(grid.size() - 1) {
    lower_.resize(n_);
    diag_.resize(n_);
    upper_.resize(n_);
    rhs_.resize(n_);
    phi_.resize(n_ + 1);
    dphi_.resize(n_ + 1);
    phi_old_.resize(n_ + 1);
    dphi_old_.resize(n_ + 1);
  }

  void step(std::vector<double>& u, double t, double dt) {
    absorb(u, t, t + 0.5 * dt);
    diffuse(u, dt);
    absorb(u, t + 0.5 * dt, t + dt);
  }

  std::size_t newton_iterations() const { return newton_; }

 private:
  std::span<double> interior(std::vector<double>& u) const { return {u.data(), n_}; }

  void absorb(std::vector<double>& u, double a, double b) {
    if (!(b > a)) return;
    const double log_dh = spec_.kernel.log_increment(a, b);
    if (log_dh == kNegInf) return;
    std::visit(overloaded{
                   [&](const PowerAbsorption& p) {
                     pointwise::absorb_power(opts_.exec, interior(u), log_dh, p.q);
                   },
                   [&](const PorousAbsorption& p) {
                     pointwise::absorb_power(opts_.exec, interior(u), log_dh, p.q);
                   },
                   [&](const ExponentialAbsorption&) {
                     pointwise::absorb_exponential(opts_.exec, interior(u), log_dh);
                   },
                   [&](const AuxiliaryAbsorption& a) {
                     newton_ += static_cast<std::size_t>(pointwise::absorb_auxiliary(
                         opts_.exec, interior(u), std::exp(log_dh), a.ell));
                   },
               },
               spec_.nonlinearity);
  }

  void diffuse(std::vector<double>& u, double dt) {
    if (const auto* p = std::get_if<PorousAbsorption>(&spec_.nonlinearity)) {
      diffuse_porous(u, dt, p->m);
    } else {
      diffuse_linear(u, dt);
    }
  }

  // vol_j (L w)_j = f_j (w_{j+1} - w_j) - f_{j-1} (w_j - w_{j-1}).
  double flux_divergence(std::span<const double> w, std::size_t j) const {
    const auto f = grid_.face_coefficients();
    double out = f[j] * (w[j + 1] - w[j]);
    if (j > 0) out -= f[j - 1] * (w[j] - w[j - 1]);
    return out;
  }

  void diffuse_linear(std::vector<double>& u, double dt) {
    const auto f = grid_.face_coefficients();
    const auto vol = grid_.volumes();
    const double th = opts_.theta;
    for (std::size_t j = 0; j < n_; ++j) {
      const double left = j > 0 ? f[j - 1] : 0.0;
      diag_[j] = vol[j] + dt * th * (f[j] + left);
      lower_[j] = -dt * th * left;
      upper_[j] = -dt * th * f[j];
      rhs_[j] = vol[j] * u[j];
      if (th < 1.0) rhs_[j] += dt * (1.0 - th) * flux_divergence(u, j);
    }
    solve_tridiagonal(lower_, diag_, upper_, rhs_, scratch_);
    std::copy(rhs_.begin(), rhs_.end(), u.begin());
    u[n_] = 0.0;
  }

  void diffuse_porous(std::vector<double>& u, double dt, double m) {
    const auto f = grid_.face_coefficients();
    const auto vol = grid_.volumes();
    const double th = opts_.theta;
    const double eps = opts_.porous_regularization;
    std::vector<double>& w = work_;
    w = u;
    if (th < 1.0) pointwise::porous_mobility(opts_.exec, u, phi_old_, dphi_old_, m, eps);
    double wmax = 0.0;
    for (double x : u) wmax = std::max(wmax, std::abs(x));
    bool converged = false;
    for (int it = 0; it < opts_.newton_max_iterations; ++it) {
      ++newton_;
      pointwise::porous_mobility(opts_.exec, w, phi_, dphi_, m, eps);
      for (std::size_t j = 0; j < n_; ++j) {
        const double left = j > 0 ? f[j - 1] : 0.0;
        double residual = vol[j] * (w[j] - u[j]) - dt * th * flux_divergence(phi_, j);
        if (th < 1.0) residual -= dt * (1.0 - th) * flux_divergence(phi_old_, j);
        rhs_[j] = -residual;
        diag_[j] = vol[j] + dt * th * (f[j] + left) * dphi_[j];
        lower_[j] = j > 0 ? -dt * th * left * dphi_[j - 1] : 0.0;
        upper_[j] = -dt * th * f[j] * dphi_[j + 1];
      }
      solve_tridiagonal(lower_, diag_, upper_, rhs_, scratch_);
      double dmax = 0.0;
      wmax = 0.0;
      for (std::size_t j = 0; j < n_; ++j) {
        w[j] += rhs_[j];
        dmax = std::max(dmax, std::abs(rhs_[j]));
        wmax = std::max(wmax, std::abs(w[j]));
      }
      if (!std::isfinite(dmax)) break;
      if (dmax <= opts_.newton_tolerance * std::max(wmax, 1e-300)) {
        converged = true;
        break;
      }
    }
    if (!converged) throw NumericalFailure("porous Newton iteration did not converge");
    for (std::size_t j = 0; j < n_; ++j) u[j] = std::max(w[j], 0.0);
    u[n_] = 0.0;
  }

  const ProblemSpec& spec_;
  const RadialGrid& grid_;
  const SolveOptions& opts_;
  std::size_t n_;  // unknowns; node n_ is the Dirichlet node
  std::vector<double> lower_, diag_, upper_, rhs_, scratch_, work_;
  std::vector<double> phi_, dphi_, phi_old_, dphi_old_;
  std::size_t newton_ = 0;
};

double max_abs(std::span<const double> u) {
  double m = 0.0;
  for (double x : u) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

// ---------------------------------------------------------------- initial data

double heat_kernel(int N, double r, double t) {
  if (!(t > 0.0)) throw DomainError("heat kernel needs t > 0");
  return std::pow(4.0 * std::numbers::pi * t, -0.5 * N) * std::exp(-r * r / (4.0 * t));
}

double barenblatt(int N, double m, double mass, double r, double t) {
  if (!(m > 1.0) || !(t > 0.0) || !(mass >= 0.0)) throw DomainError("barenblatt needs m > 1, t > 0");
  const double alpha = N / (N * (m - 1.0) + 2.0);
  const double beta = alpha / N;
  const double kappa = beta * (m - 1.0) / (2.0 * m);
  const double p = 1.0 / (m - 1.0);
  const double integral = std::pow(kappa, -0.5 * N) * std::pow(std::numbers::pi, 0.5 * N) *
                          std::tgamma(p + 1.0) / std::tgamma(p + 1.0 + 0.5 * N);
  const double C = std::pow(mass / integral, 1.0 / (p + 0.5 * N));
  const double core = C - kappa * r * r * std::pow(t, -2.0 * beta);
  return core > 0.0 ? std::pow(t, -alpha) * std::pow(core, p) : 0.0;
}

double barenblatt_mass_within(int N, double m, double mass, double r, double t) {
  const double alpha = N / (N * (m - 1.0) + 2.0);
  const double beta = alpha / N;
  const double kappa = beta * (m - 1.0) / (2.0 * m);
  const double p = 1.0 / (m - 1.0);
  const double integral = std::pow(kappa, -0.5 * N) * std::pow(std::numbers::pi, 0.5 * N) *
                          std::tgamma(p + 1.0) / std::tgamma(p + 1.0 + 0.5 * N);
  const double C = std::pow(mass / integral, 1.0 / (p + 0.5 * N));
  // s = kappa r^2 t^(-2 beta) / C maps the support onto [0, 1].
  const double s = std::min(1.0, kappa * r * r * std::pow(t, -2.0 * beta) / C);
  return mass * boost::math::ibeta(0.5 * N, p + 1.0, s);
}

double unit_bump(int N, double y) {
  const double ay = std::abs(y);
  if (ay >= 1.0) return 0.0;
  const double norm = sphere_area(N) * 8.0 / (N * (N + 2.0) * (N + 4.0));
  const double s = 1.0 - ay * ay;
  return s * s / norm;
}

InitialData InitialData::warm_start(double k, double t0) {
  if (!(k > 0.0) || !(t0 > 0.0)) throw DomainError("warm start needs k > 0, t0 > 0");
  return InitialData(WarmStart{k, t0});
}

InitialData InitialData::bump(double k, double log_M) {
  if (!(k > 0.0)) throw DomainError("bump needs k > 0");
  return InitialData(Bump{k, log_M});
}

InitialData InitialData::flat(double A, double t_start) {
  if (!(t_start >= 0.0)) throw DomainError("flat data needs t_start >= 0");
  return InitialData(Flat{A, t_start});
}

InitialData InitialData::samples(std::vector<double> r, std::vector<double> u, double t_start) {
  if (r.size() != u.size() || r.size() < 2) throw DomainError("samples need matching r, u");
  for (std::size_t i = 1; i < r.size(); ++i)
    if (!(r[i] > r[i - 1])) throw DomainError("sample radii must increase");
  return InitialData(Samples{std::move(r), std::move(u), t_start});
}

double InitialData::start_time() const {
  return std::visit(overloaded{
                        [](const WarmStart& w) { return w.t0; },
                        [](const Bump&) { return 0.0; },
                        [](const Flat& f) { return f.t_start; },
                        [](const Samples& s) { return s.t_start; },
                    },
                    rep_);
}

std::string InitialData::describe() const {
  return std::visit(overloaded{
                        [](const WarmStart& w) {
                          return "warm-start:k=" + fmt(w.k) + ",t0=" + fmt(w.t0);
                        },
                        [](const Bump& b) { return "bump:k=" + fmt(b.k) + ",logM=" + fmt(b.log_M); },
                        [](const Flat& f) { return "flat:A=" + fmt(f.A) + ",t0=" + fmt(f.t_start); },
                        [](const Samples& s) {
                          return "samples:n=" + std::to_string(s.r.size()) + ",t0=" + fmt(s.t_start);
                        },
                    },
                    rep_);
}

std::vector<double> sample_initial(const InitialData& init, const ProblemSpec& spec,
                                   const RadialGrid& grid) {
  const auto r = grid.nodes();
  std::vector<double> u(r.size(), 0.0);
  const int N = grid.dimension();
  std::visit(overloaded{
                 [&](const InitialData::WarmStart& w) {
                   const auto* porous = std::get_if<PorousAbsorption>(&spec.nonlinearity);
                   if (!porous) {
                     for (std::size_t j = 0; j < r.size(); ++j) u[j] = w.k * heat_kernel(N, r[j], w.t0);
                     return;
                   }
                   // Control-volume averages: exact mass even when the
                   // support is narrower than a cell.
                   const auto vol = grid.volumes();
                   double inner_mass = 0.0;
                   for (std::size_t j = 0; j < r.size(); ++j) {
                     const double outer = j + 1 < r.size() ? 0.5 * (r[j] + r[j + 1]) : r.back();
                     const double m_out = barenblatt_mass_within(N, porous->m, w.k, outer, w.t0);
                     u[j] = (m_out - inner_mass) / vol[j];
                     inner_mass = m_out;
                   }
                 },
                 [&](const InitialData::Bump& b) {
                   const double amp = std::exp(0.5 * b.log_M) * std::pow(b.k, 0.5 * N);
                   for (std::size_t j = 0; j < r.size(); ++j) u[j] = amp * unit_bump(N, b.k * r[j]);
                 },
                 [&](const InitialData::Flat& f) { std::fill(u.begin(), u.end(), f.A); },
                 [&](const InitialData::Samples& s) {
                   for (std::size_t j = 0; j < r.size(); ++j) {
                     if (r[j] > s.r.back()) continue;
                     const auto it = std::upper_bound(s.r.begin(), s.r.end(), r[j]);
                     if (it == s.r.begin()) {
                       u[j] = s.u.front();
                       continue;
                     }
                     const std::size_t i = std::min<std::size_t>(it - s.r.begin(), s.r.size() - 1) - 1;
                     const double wgt = std::clamp((r[j] - s.r[i]) / (s.r[i + 1] - s.r[i]), 0.0, 1.0);
                     u[j] = (1.0 - wgt) * s.u[i] + wgt * s.u[i + 1];
                   }
                 },
             },
             init.rep());
  u.back() = 0.0;
  return u;
}

double default_outer_radius(int N, double T) {
  return std::max(6.0 * std::sqrt(T), 1.0) * std::sqrt(static_cast<double>(N));
}

// ---------------------------------------------------------------- solve

std::size_t SolveResult::snapshot_index(double t) const {
  for (std::size_t i = 0; i < times.size(); ++i)
    if (same_time(times[i], t)) return i;
  throw DomainError("no snapshot stored at t = " + fmt(t));
}

SolveResult solve(const ProblemSpec& spec, const InitialData& init, const RadialGrid& grid,
                  const SolveOptions& opts) {
  const auto wall_start = std::chrono::steady_clock::now();
  spec.validate();
  if (grid.dimension() != spec.N) throw DomainError("grid dimension differs from problem N");
  if (std::abs(grid.radius() - spec.R) > 1e-12 * spec.R)
    throw DomainError("grid radius differs from problem R");
  if (!(opts.theta >= 0.5 && opts.theta <= 1.0)) throw DomainError("theta must lie in [1/2, 1]");
  if (!(opts.rtol > 0.0)) throw DomainError("rtol must be positive");
  const double t_start = init.start_time();
  if (!(t_start < spec.T)) throw DomainError("initial time must precede the horizon T");

  if (opts.check_resolution) {
    const auto* w = std::get_if<InitialData::WarmStart>(&init.rep());
    if (w && !spec.is_porous()) {
      if (grid.nodes_within(2.0 * std::sqrt(w->t0)) < 8)
        throw DomainError("grid does not resolve the warm-start core (need >= 8 nodes in 2 sqrt(t0))");
    } else if (const auto* b = std::get_if<InitialData::Bump>(&init.rep())) {
      if (grid.nodes_within(1.0 / b->k) < 8)
        throw DomainError("grid does not resolve the bump support (need >= 8 nodes in 1/k)");
    }
  }

  SolveResult result{spec, grid, init.describe(), {}, {}, {}};
  SolveDiagnostics& diag = result.diagnostics;
  std::vector<double> u = sample_initial(init, spec, grid);

  // Running ln H(t); kept in step with the absorption increments.
  double log_H = t_start > 0.0 ? spec.kernel.log_H(t_start) : kNegInf;
  if (t_start > 0.0) {
    const FlatBound cap = flat_supersolution(spec, t_start);
    if (!cap.infinite) {
      for (std::size_t j = 0; j + 1 < u.size(); ++j) {
        if (u[j] > cap.value) {
          u[j] = cap.value;
          ++diag.clamp_events;
        }
      }
      diag.clamped = diag.clamp_events > 0;
    }
  }

  // Output times.
  std::vector<double> targets;
  for (double s : opts.snapshot_times)
    if (s > t_start && s <= spec.T * (1.0 + 1e-14)) targets.push_back(std::min(s, spec.T));
  if (opts.log_snapshots > 0) {
    const double lo = t_start > 0.0 ? t_start : spec.T * 1e-6;
    for (int i = 1; i <= opts.log_snapshots; ++i)
      targets.push_back(lo * std::pow(spec.T / lo, static_cast<double>(i) / opts.log_snapshots));
  }
  targets.push_back(spec.T);
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end(), same_time), targets.end());
  targets.back() = spec.T;

  auto record = [&](double t) {
    result.times.push_back(t);
    result.fields.push_back(u);
    diag.mass.push_back(grid.mass(u));
    diag.max_u = std::max(diag.max_u, max_abs(u));
  };
  auto check_bound = [&](double t, const FlatBound& bound) {
    if (!opts.check_supersolution || bound.infinite) return;
    for (std::size_t j = 0; j < u.size(); ++j) {
      if (violates(spec, bound, u[j]))
        throw ComparisonViolation("solution exceeds the flat supersolution at t = " + fmt(t) +
                                      ", r = " + fmt(grid.nodes()[j]),
                                  t, grid.nodes()[j], u[j], bound.value);
    }
  };

  record(t_start);
  Stepper stepper(spec, grid, opts);
  std::vector<double> full, half;
  double t = t_start;
  std::size_t next = 0;

  auto after_accept = [&](double t_new, double log_dh_total) {
    log_H = quad::log_add(log_H, log_dh_total);
    check_bound(t_new, bound_from_log_H(spec, log_H));
    ++diag.steps;
    diag.step_times.push_back(t_new);
    if (next < targets.size() && same_time(t_new, targets[next])) {
      check_bound(t_new, flat_supersolution(spec, t_new));
      record(t_new);
      ++next;
    }
  };

  if (opts.fixed_steps) {
    for (double s : *opts.fixed_steps) {
      if (s <= t * (1.0 + 1e-15)) continue;
      const double dt = s - t;
      stepper.step(u, t, 0.5 * dt);
      stepper.step(u, t + 0.5 * dt, 0.5 * dt);
      const double log_dh = spec.kernel.log_increment(t, s);
      t = s;
      after_accept(t, log_dh);
      if (diag.steps > opts.max_steps) throw StepFailure("step budget exhausted", t);
    }
    if (!same_time(t, spec.T)) throw DomainError("fixed step sequence does not reach T");
  } else {
    const double span = spec.T - t_start;
    const double dt_max = opts.dt_max > 0.0 ? opts.dt_max : span / 20.0;
    double dt = opts.dt_initial > 0.0 ? opts.dt_initial
                                      : std::min(dt_max, t_start > 0.0 ? 1e-3 * t_start : 1e-7 * span);
    int failures = 0;
    while (next < targets.size()) {
      const double target = targets[next];
      double h = std::min(dt, dt_max);
      const double remaining = target - t;
      if (h >= remaining) h = remaining;
      else if (h > 0.5 * remaining) h = 0.5 * remaining;
      if (!(h > 1e-15 * std::max(t, span))) throw StepFailure("time step underflow", t);

      double err = std::numeric_limits<double>::infinity();
      try {
        full = u;
        stepper.step(full, t, h);
        half = u;
        stepper.step(half, t, 0.5 * h);
        stepper.step(half, t + 0.5 * h, 0.5 * h);
        double diff = 0.0;
        for (std::size_t j = 0; j < u.size(); ++j) diff = std::max(diff, std::abs(full[j] - half[j]));
        const double scale = std::max(max_abs(half), 1e-300);
        err = diff / (opts.rtol * scale);
        if (!std::isfinite(err)) err = std::numeric_limits<double>::infinity();
      } catch (const NumericalFailure&) {
        err = std::numeric_limits<double>::infinity();
      }

      if (err <= 1.0) {
        failures = 0;
        const double t_new = remaining == h ? target : t + h;
        const double log_dh = spec.kernel.log_increment(t, t_new);
        u.swap(half);
        t = t_new;
        after_accept(t, log_dh);
        const double grow = err > 0.0 ? 0.9 / std::sqrt(err) : 3.0;
        dt = h * std::clamp(grow, 0.2, 3.0);
      } else {
        ++diag.rejected_steps;
        if (++failures > kMaxConsecutiveFailures) throw StepFailure("step rejected repeatedly", t);
        const double shrink = std::isfinite(err) ? 0.9 / std::sqrt(err) : 0.25;
        dt = h * std::clamp(shrink, 0.1, 0.5);
      }
      if (diag.steps > opts.max_steps) throw StepFailure("step budget exhausted", t);
    }
  }
  diag.newton_iterations = stepper.newton_iterations();
  diag.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  return result;
}

double probe(const SolveResult& result, double x, double t) {
  const auto& times = result.times;
  if (times.empty()) throw DomainError("probe on an empty result");
  if (!(x >= 0.0 && x <= result.grid.radius())) throw DomainError("probe radius outside the grid");
  const double t0 = times.front();
  const double t1 = times.back();
  if (!(t >= t0 - 1e-14 * t1 && t <= t1 * (1.0 + 1e-14)))
    throw DomainError("probe time outside the stored range");
  std::size_t i = 0;
  while (i + 2 < times.size() && times[i + 1] < t) ++i;
  const double tw = times.size() == 1 ? 0.0 : std::clamp((t - times[i]) / (times[i + 1] - times[i]), 0.0, 1.0);
  const std::size_t j = result.grid.locate(x);
  const auto r = result.grid.nodes();
  const double xw = std::clamp((x - r[j]) / (r[j + 1] - r[j]), 0.0, 1.0);
  auto at = [&](std::size_t snap) {
    const auto& f = result.fields[snap];
    return (1.0 - xw) * f[j] + xw * f[j + 1];
  };
  if (times.size() == 1 || tw == 0.0) return at(i);
  if (tw == 1.0) return at(i + 1);
  return (1.0 - tw) * at(i) + tw * at(i + 1);
}

ProblemSpec lemma1_auxiliary_spec(const ProblemSpec& main, double sigma, double tau, double ell) {
  ProblemSpec aux = main;
  aux.nonlinearity = AuxiliaryAbsorption{ell};
  aux.kernel = AbsorptionKernel::power_time(lemma1_constant(sigma, tau, ell, main.N),
                                            alpha_ell(main.N, ell));
  return aux;
}

ComparisonPair solve_comparison_pair(const ProblemSpec& main, const ProblemSpec& auxiliary,
                                     const InitialData& init, const RadialGrid& grid, double tau,
                                     const SolveOptions& opts) {
  if (auxiliary.N != main.N || auxiliary.R != main.R || auxiliary.T != main.T)
    throw DomainError("comparison pair needs identical domains");
  SolveOptions main_opts = opts;
  main_opts.snapshot_times.push_back(std::min(tau, main.T));
  SolveResult u = solve(main, init, grid, main_opts);
  SolveOptions aux_opts = main_opts;
  aux_opts.fixed_steps = u.diagnostics.step_times;
  aux_opts.check_supersolution = false;
  SolveResult v = solve(auxiliary, init, grid, aux_opts);

  ComparisonReport rep;
  rep.min_difference = std::numeric_limits<double>::infinity();
  rep.max_difference = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < u.times.size(); ++i) {
    if (u.times[i] > tau * (1.0 + 1e-12)) break;
    const auto& a = u.fields[i];
    const auto& b = v.fields[v.snapshot_index(u.times[i])];
    for (std::size_t j = 0; j < a.size(); ++j) {
      const double d = a[j] - b[j];
      ++rep.points;
      if (d < rep.min_difference) {
        rep.min_difference = d;
        rep.t_at_min = u.times[i];
        rep.r_at_min = grid.nodes()[j];
      }
      rep.max_difference = std::max(rep.max_difference, d);
    }
  }
  return {std::move(u), std::move(v), rep};
}

}  // namespace blowup
