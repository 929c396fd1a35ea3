#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "blowup/errors.hpp"
#include "blowup/rdsolver.hpp"

using namespace blowup;

namespace {

double max_rel_error(const SolveResult& r, const std::function<double(double)>& exact) {
  const auto nodes = r.grid.nodes();
  double err = 0.0, peak = 0.0;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    err = std::max(err, std::abs(r.fields.back()[j] - exact(nodes[j])));
    peak = std::max(peak, std::abs(exact(nodes[j])));
  }
  return err / peak;
}

}  // namespace

TEST_CASE("heat kernel value") {
  CHECK(heat_kernel(1, 0.5, 0.1) == doctest::Approx(0.477486411533556570).epsilon(1e-14));
  CHECK(heat_kernel(3, 0.5, 0.1) == doctest::Approx(0.379971613273882563).epsilon(1e-14));
}

TEST_CASE("h = 0 reproduces the heat kernel, and refinement improves it") {
  ProblemSpec spec{1, PowerAbsorption{2.0}, AbsorptionKernel::constant(0.0), default_outer_radius(1, 0.1), 0.1};
  const RadialGrid g(1, spec.R, 200, 1.01);
  auto exact = [](double x) { return heat_kernel(1, x, 0.1); };
  const auto coarse = solve(spec, InitialData::warm_start(1.0, 0.01), g);
  const auto fine = solve(spec, InitialData::warm_start(1.0, 0.01), g.refined());
  CHECK(max_rel_error(coarse, exact) <= 1e-2);
  CHECK(max_rel_error(fine, exact) <= 5e-3);
  CHECK(max_rel_error(fine, exact) < max_rel_error(coarse, exact));
  CHECK(coarse.diagnostics.clamp_events == 0);
}

TEST_CASE("heat kernel in three dimensions") {
  ProblemSpec spec{3, PowerAbsorption{2.0}, AbsorptionKernel::constant(0.0), default_outer_radius(3, 0.1), 0.1};
  const RadialGrid g(3, spec.R, 300, 1.01);
  const auto r = solve(spec, InitialData::warm_start(1.0, 0.01), g);
  CHECK(max_rel_error(r, [](double x) { return heat_kernel(3, x, 0.1); }) <= 1e-2);
}

TEST_CASE("flat data follows the absorption ODE") {
  SolveOptions o;
  o.snapshot_times = {0.1, 0.5};
  o.check_resolution = false;
  const RadialGrid g(1, 12.0, 100, 1.0);
  ProblemSpec p{1, PowerAbsorption{2.0}, AbsorptionKernel::constant(1.0), 12.0, 1.0};
  const auto rp = solve(p, InitialData::flat(2.0), g, o);
  ProblemSpec e{1, ExponentialAbsorption{}, AbsorptionKernel::constant(1.0), 12.0, 1.0};
  const auto re = solve(e, InitialData::flat(1.0), g, o);
  for (double t : {0.1, 0.5, 1.0}) {
    CHECK(std::abs(probe(rp, 0.0, t) - 2.0 / (1.0 + 2.0 * t)) <= 1e-6);
    CHECK(std::abs(probe(re, 0.0, t) + std::log(std::exp(-1.0) + t)) <= 1e-6);
  }
}

TEST_CASE("Barenblatt profile: mass and the exact cell deposit") {
  for (int N : {1, 2, 3}) {
    const double m = 2.0, t = 0.01;
    CHECK(barenblatt_mass_within(N, m, 3.0, 100.0, t) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(barenblatt_mass_within(N, m, 3.0, 0.0, t) == 0.0);
    // mass inside r is nondecreasing in r
    double prev = 0.0;
    for (double r = 0.01; r < 1.0; r += 0.01) {
      const double mr = barenblatt_mass_within(N, m, 3.0, r, t);
      CHECK(mr >= prev);
      prev = mr;
    }
  }
  ProblemSpec spec{1, PorousAbsorption{2.0, 3.0}, AbsorptionKernel::power_time(1.0, 1.0), 8.0, 0.06};
  const RadialGrid g(1, 8.0, 600, 1.005);
  const auto u = sample_initial(InitialData::warm_start(5.0, 1e-3), spec, g);
  CHECK(g.mass(u) == doctest::Approx(5.0).epsilon(1e-10));
}

TEST_CASE("porous medium with h = 0 follows the Barenblatt solution") {
  ProblemSpec spec{1, PorousAbsorption{2.0, 3.0}, AbsorptionKernel::constant(0.0), 3.0, 0.05};
  const RadialGrid g(1, 3.0, 400, 1.0);
  const auto r = solve(spec, InitialData::warm_start(1.0, 0.01), g);
  const double peak = barenblatt(1, 2.0, 1.0, 0.0, 0.05);
  CHECK(std::abs(probe(r, 0.0, 0.05) - peak) / peak <= 2e-2);
  CHECK(g.mass(r.fields.back()) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("solutions respect the flat supersolution") {
  // h = 1: U(t) = 1/t sits far below the warm-start peak, so the data are capped.
  ProblemSpec spec{1, PowerAbsorption{2.0}, AbsorptionKernel::constant(1.0), 3.0, 0.06};
  const RadialGrid g(1, 3.0, 200, 1.01);
  SolveOptions o;
  o.log_snapshots = 10;
  const auto r = solve(spec, InitialData::warm_start(1e5, 1e-3), g, o);
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    const FlatBound b = eval_U(spec, r.times[i]);
    for (double u : r.fields[i]) CHECK_FALSE(b.exceeded_by(u, 1e-6, 0.0));
  }
  CHECK(r.diagnostics.clamp_events > 0);
}

TEST_CASE("ordered data give ordered solutions on a shared step sequence") {
  ProblemSpec spec{1, PowerAbsorption{2.0}, AbsorptionKernel::constant(1.0), 3.0, 0.05};
  const RadialGrid g(1, 3.0, 200, 1.01);
  const auto big = solve(spec, InitialData::warm_start(100.0, 1e-3), g);
  SolveOptions o;
  o.fixed_steps = big.diagnostics.step_times;
  const auto small = solve(spec, InitialData::warm_start(10.0, 1e-3), g, o);
  for (std::size_t j = 0; j < g.size(); ++j) CHECK(small.fields.back()[j] <= big.fields.back()[j]);
}

TEST_CASE("parallel node kernels give the serial solution") {
  ProblemSpec spec{1, PowerAbsorption{2.0}, AbsorptionKernel::constant(1.0), 3.0, 0.05};
  const RadialGrid g(1, 3.0, 200, 1.01);
  SolveOptions o;
  const auto a = solve(spec, InitialData::warm_start(10.0, 1e-3), g, o);
  o.exec = pointwise::Exec::Parallel;
  const auto b = solve(spec, InitialData::warm_start(10.0, 1e-3), g, o);
  CHECK(a.fields.back() == b.fields.back());
}

TEST_CASE("input validation") {
  ProblemSpec spec{1, PowerAbsorption{2.0}, AbsorptionKernel::constant(1.0), 3.0, 0.05};
  const RadialGrid g(1, 3.0, 200, 1.01);
  CHECK_THROWS_AS(solve(spec, InitialData::warm_start(1.0, 1e-6), g), DomainError);  // unresolved core
  CHECK_THROWS_AS(solve(spec, InitialData::warm_start(1.0, 0.1), g), DomainError);   // starts after T
  const RadialGrid other(1, 2.0, 200, 1.01);
  CHECK_THROWS_AS(solve(spec, InitialData::warm_start(1.0, 1e-3), other), DomainError);
  const auto r = solve(spec, InitialData::warm_start(1.0, 1e-3), g);
  CHECK_THROWS_AS(probe(r, 5.0, 0.05), DomainError);
  CHECK_THROWS_AS(r.snapshot_index(0.0123), DomainError);
}

TEST_CASE("auxiliary problem stays below the main solution") {
  ProblemSpec main;
  main.N = 1;
  main.nonlinearity = ExponentialAbsorption{};
  main.kernel = AbsorptionKernel::lemma1(1.0);
  main.T = 0.4;
  main.R = default_outer_radius(1, 0.4);
  const ProblemSpec aux = lemma1_auxiliary_spec(main, 1.0, 0.4, 2.0);
  const RadialGrid g(1, main.R, 200, 1.01);
  SolveOptions o;
  o.log_snapshots = 12;
  const auto pair = solve_comparison_pair(main, aux, InitialData::warm_start(100.0, 0.01), g, 0.4, o);
  CHECK(pair.report.min_difference >= -1e-4);
  CHECK(pair.report.points > 0);
}
