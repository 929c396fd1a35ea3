#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "blowup/dichotomy.hpp"
#include "blowup/errors.hpp"

using namespace blowup;

namespace {

SweepConfig small_config() {
  SweepConfig c;
  c.probes = {{0.0, 0.005}, {0.5, 0.05}, {1.0, 0.05}};
  c.ladder = geometric_ladder(1, 4);
  c.t_warm = 1e-3;
  c.workers = 1;
  return c;
}

ProblemSpec power_spec(const AbsorptionKernel& k) { return {1, PowerAbsorption{2.0}, k, 3.0, 0.06}; }

// A table built by hand, for classifier checks.
SweepTable synthetic(const std::vector<std::vector<double>>& columns, double bound) {
  SweepTable t;
  t.complete = true;
  const std::size_t nk = columns.front().size();
  t.ladder = geometric_ladder(1, static_cast<int>(nk));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    t.probes.push_back({0.5 * j, 0.05});
    t.bounds.push_back(std::isinf(bound) ? FlatBound::inf() : FlatBound::finite(bound));
  }
  t.values.assign(nk, std::vector<double>(columns.size()));
  for (std::size_t i = 0; i < nk; ++i)
    for (std::size_t j = 0; j < columns.size(); ++j) t.values[i][j] = columns[j][i];
  return t;
}

}  // namespace

TEST_CASE("geometric ladder") {
  const auto l = geometric_ladder(1, 6);
  REQUIRE(l.size() == 6);
  CHECK(l.front() == 10.0);
  CHECK(l.back() == doctest::Approx(1e6));
  CHECK(geometric_ladder(0, 1, 4).size() == 5);
  CHECK_THROWS_AS(geometric_ladder(3, 1), DomainError);
}

TEST_CASE("worker count from the environment") {
  unsetenv("BLOWUP_WORKERS");
  CHECK(sweep_workers_from_env() == 1);
  setenv("BLOWUP_WORKERS", "3", 1);
  CHECK(sweep_workers_from_env() == 3);
  setenv("BLOWUP_WORKERS", "zero", 1);
  CHECK(sweep_workers_from_env() == 1);
  unsetenv("BLOWUP_WORKERS");
}

TEST_CASE("h = 0 sweep is linear in k") {
  const auto t = sweep(power_spec(AbsorptionKernel::constant(0.0)), small_config(), RadialGrid(1, 3.0, 200, 1.01));
  REQUIRE(t.complete);
  for (std::size_t i = 0; i < t.ladder.size(); ++i)
    CHECK(t.values[i][1] / t.ladder[i] == doctest::Approx(heat_kernel(1, 0.5, 0.05)).epsilon(1e-2));
  CHECK(t.bounds[1].infinite);
  CHECK(classify(t).cls == VerdictClass::Complete);
}

TEST_CASE("sweep: monotone, bounded and deterministic across worker counts") {
  auto cfg = small_config();
  const auto spec = power_spec(AbsorptionKernel::exp_omega(OmegaSpec::constant(1.0)));
  const RadialGrid g(1, 3.0, 200, 1.01);
  const auto a = sweep(spec, cfg, g);
  cfg.workers = 3;
  const auto b = sweep(spec, cfg, g);
  REQUIRE(a.complete);
  CHECK(a.monotone);
  CHECK(a.bounded);
  CHECK(a.worst_monotone_drop <= kMonotoneTolerance);
  CHECK(a.values == b.values);
}

TEST_CASE("sweep preconditions and refusals") {
  const RadialGrid g(1, 3.0, 200, 1.01);
  auto cfg = small_config();
  cfg.probes = {{0.5, 0.5}};
  CHECK_THROWS_AS(sweep(power_spec(AbsorptionKernel::constant(1.0)), cfg, g), ConfigError);
  cfg = small_config();
  cfg.ladder = {10.0, 5.0};
  CHECK_THROWS_AS(sweep(power_spec(AbsorptionKernel::constant(1.0)), cfg, g), ConfigError);
  // H infinite: h = t^(-4/3)
  CHECK_THROWS_AS(
      sweep(power_spec(AbsorptionKernel::porous_threshold(2.0, 3.0, OmegaSpec::power(1.0, 7.0 / 3.0))), small_config(), g),
      Inadmissible);
  // exponential with h = 1: t^{1/2} (-ln h) = 0 does not blow up
  ProblemSpec expo{1, ExponentialAbsorption{}, AbsorptionKernel::constant(1.0), 3.0, 0.06};
  CHECK_THROWS_AS(sweep(expo, small_config(), g), Inadmissible);
  // porous with omega = t^{7/3}: h = t^{-4/3} is not integrable
  ProblemSpec porous{1, PorousAbsorption{2.0, 3.0},
                     AbsorptionKernel::porous_threshold(2.0, 3.0, OmegaSpec::power(1.0, 7.0 / 3.0)), 3.0, 0.06};
  CHECK_THROWS_AS(porous_sweep(porous, small_config(), g), Inadmissible);
  CHECK_THROWS_AS(porous_sweep(power_spec(AbsorptionKernel::constant(1.0)), small_config(), g), WrongVariant);
}

TEST_CASE("flat initial data: columns do not depend on k") {
  // k enters only warm starts; a flat run is the same for every k.
  ProblemSpec spec = power_spec(AbsorptionKernel::constant(1.0));
  const RadialGrid g(1, 3.0, 100, 1.0);
  SolveOptions o;
  o.check_resolution = false;
  o.snapshot_times = {0.05};
  const auto a = solve(spec, InitialData::flat(3.0, 1e-3), g, o);
  const auto b = solve(spec, InitialData::flat(3.0, 1e-3), g, o);
  CHECK(probe(a, 0.5, 0.05) == probe(b, 0.5, 0.05));
}

TEST_CASE("classifier: complete, saturated, single-point, inconclusive") {
  // growing everywhere
  auto t = synthetic({{1, 2, 4, 8}, {1, 2, 4, 8}}, 100.0);
  auto v = classify(t);
  CHECK(v.cls == VerdictClass::Complete);
  // saturated at the bound
  t = synthetic({{50, 99.5, 99.6, 99.6}, {50, 99.5, 99.6, 99.6}}, 100.0);
  CHECK(classify(t).cls == VerdictClass::Complete);
  // origin grows, off-origin flat
  t = synthetic({{1, 2, 4, 8}, {1, 1.5, 1.6, 1.601}}, 100.0);
  v = classify(t);
  CHECK(v.cls == VerdictClass::SinglePoint);
  CHECK(v.increments[1] <= 0.01);
  // neither
  t = synthetic({{1, 2, 4, 8}, {1, 1.5, 1.6, 1.65}}, 100.0);
  CHECK(classify(t).cls == VerdictClass::Inconclusive);
  // the verdict is a pure function of the table
  CHECK(to_string(classify(t).cls) == to_string(classify(t).cls));
}

TEST_CASE("classifier preconditions") {
  auto t = synthetic({{1, 2, 4, 8}}, 100.0);
  t.complete = false;
  CHECK_THROWS_AS(classify(t), DomainError);
  CHECK_THROWS_AS(classify(synthetic({{1, 2, 3}}, 100.0)), DomainError);
}

TEST_CASE("Dini cross-reference by kernel family") {
  const auto c = dini_cross_reference(power_spec(AbsorptionKernel::exp_omega(OmegaSpec::constant(1.0))));
  REQUIRE(c);
  CHECK(c->cls == DiniClass::Divergent);
  const auto s = dini_cross_reference(power_spec(AbsorptionKernel::exp_omega(OmegaSpec::power(1.0, 0.5))));
  REQUIRE(s);
  CHECK(s->cls == DiniClass::Finite);
  ProblemSpec porous{1, PorousAbsorption{2.0, 3.0}, AbsorptionKernel::power_time(1.0, 1.0), 3.0, 0.06};
  const auto p = dini_cross_reference(porous);
  REQUIRE(p);
  CHECK(p->cls == DiniClass::Divergent);
  CHECK_FALSE(dini_cross_reference(power_spec(AbsorptionKernel::constant(1.0))));
}
