#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "blowup/dichotomy.hpp"
#include "blowup/parallel/pointwise.hpp"

using namespace blowup;

namespace {

std::vector<double> field(std::size_t n) {
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = 1.0 + 100.0 * std::exp(-1e-3 * double(i));
  return u;
}

template <pointwise::Exec E>
void BM_absorb_power(benchmark::State& state) {
  const auto base = field(static_cast<std::size_t>(state.range(0)));
  std::vector<double> u = base;
  for (auto _ : state) {
    u = base;
    pointwise::absorb_power(E, u, std::log(1e-3), 2.0);
    benchmark::DoNotOptimize(u.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <pointwise::Exec E>
void BM_absorb_exponential(benchmark::State& state) {
  const auto base = field(static_cast<std::size_t>(state.range(0)));
  std::vector<double> u = base;
  for (auto _ : state) {
    u = base;
    pointwise::absorb_exponential(E, u, std::log(1e-3));
    benchmark::DoNotOptimize(u.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <pointwise::Exec E>
void BM_absorb_auxiliary(benchmark::State& state) {
  const auto base = field(static_cast<std::size_t>(state.range(0)));
  std::vector<double> u = base;
  for (auto _ : state) {
    u = base;
    benchmark::DoNotOptimize(pointwise::absorb_auxiliary(E, u, 1e-4, 2.0));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <pointwise::Exec E>
void BM_porous_mobility(benchmark::State& state) {
  const auto u = field(static_cast<std::size_t>(state.range(0)));
  std::vector<double> phi(u.size()), dphi(u.size());
  for (auto _ : state) {
    pointwise::porous_mobility(E, u, phi, dphi, 2.0, 1e-10);
    benchmark::DoNotOptimize(phi.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

// A small k-sweep, by worker count.
void BM_sweep_workers(benchmark::State& state) {
  const ProblemSpec spec{1, PowerAbsorption{2.0}, AbsorptionKernel::exp_omega(OmegaSpec::constant(1.0)), 3.0, 0.06};
  const RadialGrid grid(1, 3.0, 200, 1.01);
  SweepConfig c;
  c.probes = {{0.5, 0.05}, {1.0, 0.05}};
  c.ladder = geometric_ladder(1, 4, 2);
  c.workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sweep(spec, c, grid).values.data());
}

constexpr auto kSerial = pointwise::Exec::Serial;
constexpr auto kParallel = pointwise::Exec::Parallel;

}  // namespace

BENCHMARK(BM_absorb_power<kSerial>)->RangeMultiplier(8)->Range(1 << 10, 1 << 22);
BENCHMARK(BM_absorb_power<kParallel>)->RangeMultiplier(8)->Range(1 << 10, 1 << 22)->UseRealTime();
BENCHMARK(BM_absorb_exponential<kSerial>)->RangeMultiplier(8)->Range(1 << 10, 1 << 22);
BENCHMARK(BM_absorb_exponential<kParallel>)->RangeMultiplier(8)->Range(1 << 10, 1 << 22)->UseRealTime();
BENCHMARK(BM_absorb_auxiliary<kSerial>)->RangeMultiplier(8)->Range(1 << 10, 1 << 22);
BENCHMARK(BM_absorb_auxiliary<kParallel>)->RangeMultiplier(8)->Range(1 << 10, 1 << 22)->UseRealTime();
BENCHMARK(BM_porous_mobility<kSerial>)->RangeMultiplier(8)->Range(1 << 10, 1 << 22);
BENCHMARK(BM_porous_mobility<kParallel>)->RangeMultiplier(8)->Range(1 << 10, 1 << 22)->UseRealTime();
BENCHMARK(BM_sweep_workers)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
