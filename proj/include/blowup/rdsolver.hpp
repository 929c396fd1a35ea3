#pragma once

// Radially symmetric method-of-lines integrator for
//   u_t - Lap u + h(t) u^q = 0        (power)
//   u_t - Lap u + h(t) e^u = 0        (exponential)
//   u_t - Lap u^m + h(t) u^q = 0      (porous)
//   v_t - Lap v + h(t)(v^ell + 1) = 0 (auxiliary comparison equation)
// on the ball B_R with homogeneous Dirichlet data at r = R.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "blowup/grid.hpp"
#include "blowup/kernels.hpp"
#include "blowup/parallel/pointwise.hpp"

namespace blowup {

// (4 pi t)^(-N/2) exp(-r^2 / 4t).
double heat_kernel(int N, double r, double t);

// Barenblatt profile of u_t = Lap u^m carrying the given mass.
double barenblatt(int N, double m, double mass, double r, double t);

// Mass of that profile inside the ball of radius r.
double barenblatt_mass_within(int N, double m, double mass, double r, double t);

// Normalised bump eta(y) = c_N (1 - |y|^2)_+^2 with unit integral.
double unit_bump(int N, double y);

class InitialData {
 public:
  // k times the fundamental solution of the diffusion at t0: heat kernel
  // samples, or control-volume averages of the Barenblatt profile for the
  // porous equation.
  struct WarmStart { double k; double t0; };
  // M^(1/2) k^(-N/2) k^N eta(k x) at t = 0, supported in B_{1/k}.
  struct Bump { double k; double log_M; };
  struct Flat { double A; double t_start; };
  struct Samples { std::vector<double> r; std::vector<double> u; double t_start; };
  using Rep = std::variant<WarmStart, Bump, Flat, Samples>;

  static InitialData warm_start(double k, double t0);
  static InitialData bump(double k, double log_M);
  static InitialData flat(double A, double t_start = 0.0);
  static InitialData samples(std::vector<double> r, std::vector<double> u, double t_start);

  const Rep& rep() const { return rep_; }
  double start_time() const;
  std::string describe() const;

 private:
  explicit InitialData(Rep rep) : rep_(std::move(rep)) {}
  Rep rep_;
};

// The initial field on the grid (before any cap against the flat bound).
std::vector<double> sample_initial(const InitialData& init, const ProblemSpec& spec,
                                   const RadialGrid& grid);

struct SolveOptions {
  double theta = 1.0;     // 1 implicit Euler, 1/2 Crank-Nicolson (diffusion part)
  double rtol = 1e-6;     // step-doubling target, relative to max |u|
  double dt_initial = 0.0;  // 0: chosen from the start time
  double dt_max = 0.0;      // 0: (T - t_start) / 20
  std::size_t max_steps = 5'000'000;
  std::vector<double> snapshot_times;  // extra output times; T is always stored
  int log_snapshots = 0;               // additional log-spaced output times
  // Replay these accepted step end times instead of adapting (each interval
  // is taken as two half steps, as the adaptive controller does).
  std::optional<std::vector<double>> fixed_steps;
  pointwise::Exec exec = pointwise::Exec::Serial;
  bool check_supersolution = true;
  bool check_resolution = true;
  double porous_regularization = 1e-10;
  int newton_max_iterations = 40;
  double newton_tolerance = 1e-12;
};

struct SolveDiagnostics {
  std::size_t steps = 0;
  std::size_t rejected_steps = 0;
  std::size_t newton_iterations = 0;
  std::size_t clamp_events = 0;  // initial nodes capped at the flat bound
  bool clamped = false;
  double max_u = 0.0;
  std::vector<double> mass;        // per snapshot
  std::vector<double> step_times;  // accepted step end times
  double wall_seconds = 0.0;
};

struct SolveResult {
  ProblemSpec spec;
  RadialGrid grid;
  std::string initial_description;
  std::vector<double> times;
  std::vector<std::vector<double>> fields;
  SolveDiagnostics diagnostics;

  std::size_t snapshot_index(double t) const;  // exact match, throws otherwise
};

SolveResult solve(const ProblemSpec& spec, const InitialData& init, const RadialGrid& grid,
                  const SolveOptions& opts = {});

// Bilinear interpolation in (r, t) of the stored snapshots.
double probe(const SolveResult& result, double x, double t);

// Default outer radius max(6 sqrt(T), 1) * sqrt(N).
double default_outer_radius(int N, double T);

// Auxiliary problem v_t - Lap v + c t^alpha_ell (v^ell + 1) = 0 with c from
// lemma1_constant(sigma, tau, ell, N) on the same domain as `main`.
ProblemSpec lemma1_auxiliary_spec(const ProblemSpec& main, double sigma, double tau, double ell);

struct ComparisonReport {
  double min_difference = 0.0;  // min over stored (r, t <= tau) of u - v
  double max_difference = 0.0;
  double t_at_min = 0.0;
  double r_at_min = 0.0;
  std::size_t points = 0;
};

struct ComparisonPair {
  SolveResult main;
  SolveResult auxiliary;
  ComparisonReport report;
};

// Solves both problems from the same data on the same grid and step
// sequence, and reports the ordering of u - v on (0, tau].
ComparisonPair solve_comparison_pair(const ProblemSpec& main, const ProblemSpec& auxiliary,
                                     const InitialData& init, const RadialGrid& grid,
                                     double tau, const SolveOptions& opts = {});

}  // namespace blowup
