#include "blowup/dichotomy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "blowup/errors.hpp"

namespace blowup {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

EntryDiagnostics summarize(const SolveResult& r) {
  EntryDiagnostics d;
  d.ok = true;
  d.steps = r.diagnostics.steps;
  d.rejected_steps = r.diagnostics.rejected_steps;
  d.clamp_events = r.diagnostics.clamp_events;
  d.max_u = r.diagnostics.max_u;
  d.wall_seconds = r.diagnostics.wall_seconds;
  return d;
}

}  // namespace

std::vector<double> geometric_ladder(int lo_exp, int hi_exp, int per_decade) {
  if (hi_exp < lo_exp || per_decade < 1) throw DomainError("bad ladder");
  std::vector<double> out;
  for (int i = lo_exp * per_decade; i <= hi_exp * per_decade; ++i)
    out.push_back(std::pow(10.0, static_cast<double>(i) / per_decade));
  return out;
}

int sweep_workers_from_env() {
  const char* v = std::getenv("BLOWUP_WORKERS");
  if (!v) return 1;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (end == v || n < 1) return 1;
  return static_cast<int>(std::min<long>(n, 1024));
}

void check_sweep_admissible(const ProblemSpec& spec, const SweepConfig& config) {
  const double t_min = config.t_warm;
  if (std::holds_alternative<AuxiliaryAbsorption>(spec.nonlinearity))
    throw Inadmissible("sweeps run the power, exponential or porous equations only");
  if (std::isinf(spec.kernel.log_H(t_min)) && spec.kernel.log_H(t_min) > 0.0)
    throw Inadmissible("int_0^t h diverges, so the flat bound is 0 and no u_k exists");
  if (spec.is_exponential()) {
    // t^(N/2) (-ln h(t)) must grow without bound as t -> 0.
    std::vector<double> g;
    for (int e = 2; e <= 12; ++e) {
      const double t = std::pow(10.0, -e);
      g.push_back(std::pow(t, 0.5 * spec.N) * -spec.kernel.log_h(t));
    }
    bool rising = true;
    for (std::size_t i = g.size() - 4; i + 1 < g.size(); ++i)
      if (!(g[i + 1] >= g[i])) rising = false;
    if (!rising || !(g.back() >= 1e3))
      throw Inadmissible("t^(N/2)(-ln h) does not blow up as t -> 0; initial masses are not admissible");
  }
}

SweepTable sweep(const ProblemSpec& spec, const SweepConfig& config, const RadialGrid& grid) {
  spec.validate();
  if (config.probes.empty()) throw ConfigError("sweep needs at least one probe");
  if (config.ladder.empty()) throw ConfigError("sweep needs a nonempty k ladder");
  for (std::size_t i = 1; i < config.ladder.size(); ++i)
    if (!(config.ladder[i] > config.ladder[i - 1])) throw ConfigError("k ladder must increase");
  double x_max = 0.0;
  for (const auto& p : config.probes) {
    if (!(p.t > config.t_warm && p.t < spec.T))
      throw ConfigError("probe times must lie in (t_warm, T)");
    if (!(p.x >= 0.0)) throw ConfigError("probe radii must be nonnegative");
    x_max = std::max(x_max, p.x);
  }
  if (spec.R < x_max + 6.0 * std::sqrt(spec.T))
    throw ConfigError("outer radius must cover the probes plus 6 sqrt(T)");
  check_sweep_admissible(spec, config);

  SweepTable table;
  table.equation = describe(spec.nonlinearity);
  table.kernel = spec.kernel.describe();
  table.probes = config.probes;
  table.ladder = config.ladder;
  table.cells = grid.cells();
  table.R = grid.radius();
  const std::size_t nk = config.ladder.size();
  const std::size_t np = config.probes.size();
  table.values.assign(nk, std::vector<double>(np, kNaN));
  table.diagnostics.assign(nk, {});
  for (const auto& p : config.probes) table.bounds.push_back(flat_supersolution(spec, p.t));

  SolveOptions opts = config.solve;
  opts.exec = pointwise::Exec::Serial;
  for (const auto& p : config.probes) opts.snapshot_times.push_back(p.t);

  auto run_one = [&](std::size_t i, const SolveOptions& o) {
    try {
      SolveResult r = solve(spec, InitialData::warm_start(config.ladder[i], config.t_warm), grid, o);
      for (std::size_t j = 0; j < np; ++j) table.values[i][j] = probe(r, config.probes[j].x, config.probes[j].t);
      table.diagnostics[i] = summarize(r);
      return std::optional<std::vector<double>>(std::move(r.diagnostics.step_times));
    } catch (const std::exception& e) {
      table.diagnostics[i].ok = false;
      table.diagnostics[i].error = e.what();
      return std::optional<std::vector<double>>();
    }
  };

  SolveOptions replay = opts;
  std::size_t remaining = nk;
  if (config.shared_steps) {
    if (auto steps = run_one(nk - 1, opts)) replay.fixed_steps = std::move(*steps);
    remaining = nk - 1;
  }
  const int workers = config.workers > 0 ? config.workers : sweep_workers_from_env();
#pragma omp parallel for num_threads(workers) schedule(dynamic, 1)
  for (long i = 0; i < static_cast<long>(remaining); ++i) run_one(static_cast<std::size_t>(i), replay);

  table.complete = true;
  for (std::size_t i = 0; i < nk; ++i) {
    if (!table.diagnostics[i].ok) {
      table.complete = false;
      if (table.failure.empty())
        table.failure = "k = " + std::to_string(config.ladder[i]) + ": " + table.diagnostics[i].error;
    }
  }
  for (std::size_t j = 0; j < np; ++j) {
    for (std::size_t i = 0; i < nk; ++i) {
      const double v = table.values[i][j];
      if (std::isnan(v)) continue;
      if (!table.bounds[j].infinite && spec.absorption_exponent() &&
          table.bounds[j].exceeded_by(v, 1e-6, 0.0))
        table.bounded = false;
      if (spec.is_exponential() && !table.bounds[j].infinite && table.bounds[j].exceeded_by(v, 0.0, 1e-6))
        table.bounded = false;
      if (i == 0 || std::isnan(table.values[i - 1][j])) continue;
      const double prev = table.values[i - 1][j];
      const double drop = (prev - v) / std::max(1.0, std::abs(prev));
      table.worst_monotone_drop = std::max(table.worst_monotone_drop, drop);
      if (drop > kMonotoneTolerance) table.monotone = false;
    }
  }
  return table;
}

SweepTable porous_sweep(const ProblemSpec& spec, const SweepConfig& config, const RadialGrid& grid) {
  const auto* p = std::get_if<PorousAbsorption>(&spec.nonlinearity);
  if (!p) throw WrongVariant("porous sweep needs the porous equation");
  if (!(p->q > p->m && p->m > 1.0)) throw ConfigError("porous sweep needs q > m > 1");
  const auto& rep = spec.kernel.rep();
  const double pure = (p->q - p->m) / (p->m - 1.0);
  bool ok = std::holds_alternative<AbsorptionKernel::PorousThreshold>(rep);
  if (const auto* pt = std::get_if<AbsorptionKernel::PowerTime>(&rep))
    ok = std::abs(pt->alpha - pure) <= 1e-12 * std::max(1.0, pure);
  if (!ok) throw ConfigError("porous sweep needs a porous-threshold kernel or h = c t^((q-m)/(m-1))");
  const DiniResult existence = porous_admissibility_probe(spec.kernel, p->m, p->q, spec.N);
  if (existence.cls == DiniClass::Divergent)
    throw Inadmissible("h t^(-(q-1)/(m-1+2/N)) is not integrable at 0; no u_k exists");
  return sweep(spec, config, grid);
}

std::string to_string(VerdictClass c) {
  switch (c) {
    case VerdictClass::Complete: return "complete";
    case VerdictClass::SinglePoint: return "single-point";
    case VerdictClass::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Verdict classify(const SweepTable& table, const Thresholds& th, const std::optional<DiniResult>& dini) {
  if (!table.complete) throw DomainError("cannot classify an incomplete sweep");
  const std::size_t nk = table.ladder.size();
  if (nk < 4) throw DomainError("classification needs at least four ladder entries");
  Verdict v;
  v.thresholds = th;
  if (dini) v.dini = to_string(dini->cls);

  // Ladder entry closest to one decade below the top.
  const double target = std::log10(table.ladder.back()) - 1.0;
  std::size_t prev = 0;
  for (std::size_t i = 0; i + 1 < nk; ++i)
    if (std::abs(std::log10(table.ladder[i]) - target) < std::abs(std::log10(table.ladder[prev]) - target)) prev = i;

  const std::size_t np = table.probes.size();
  bool all_growing = true;
  bool all_saturated_at_bound = true;
  bool off_origin_flat = true;
  bool origin_growing = true;
  bool any_off_origin = false;
  double x_min = std::numeric_limits<double>::infinity();
  for (const auto& p : table.probes) x_min = std::min(x_min, p.x);
  for (std::size_t j = 0; j < np; ++j) {
    const double top = table.values[nk - 1][j];
    const double below = table.values[prev][j];
    const double inc = below > 0.0 ? top / below - 1.0 : (top > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    v.increments.push_back(inc);
    const FlatBound& b = table.bounds[j];
    v.top_ratio.push_back(b.infinite ? kNaN : top / b.value);
    bool rising = true;
    for (std::size_t i = 1; i < nk; ++i)
      if (!(table.values[i][j] > table.values[i - 1][j])) rising = false;
    v.ratio_increasing.push_back(rising);

    if (!(inc >= th.complete_increment && rising)) all_growing = false;
    if (b.infinite || !(top / b.value >= th.saturation_ratio)) all_saturated_at_bound = false;
    const bool on_origin = table.probes[j].x <= th.origin_radius && table.probes[j].x == x_min;
    if (on_origin) {
      if (!(inc >= th.complete_increment)) origin_growing = false;
    } else {
      any_off_origin = true;
      if (!(inc <= th.single_increment)) off_origin_flat = false;
    }
  }

  std::ostringstream why;
  if (all_growing) {
    v.cls = VerdictClass::Complete;
    why << "every probe grew >= " << th.complete_increment * 100 << "% over the last decade";
  } else if (all_saturated_at_bound) {
    v.cls = VerdictClass::Complete;
    why << "every probe reached >= " << th.saturation_ratio << " of the flat supersolution";
  } else if (any_off_origin && off_origin_flat && origin_growing) {
    v.cls = VerdictClass::SinglePoint;
    why << "off-origin probes grew <= " << th.single_increment * 100 << "% over the last decade";
  } else {
    v.cls = VerdictClass::Inconclusive;
    why << "trend metrics match neither pattern";
  }
  v.reason = why.str();
  return v;
}

std::optional<DiniResult> dini_cross_reference(const ProblemSpec& spec) {
  const auto& rep = spec.kernel.rep();
  if (const auto* e = std::get_if<AbsorptionKernel::ExpOmega>(&rep)) return dini_classify(e->omega, 0.5);
  if (const auto* d = std::get_if<AbsorptionKernel::DoubleExp>(&rep)) return dini_classify(d->omega, 0.5);
  if (const auto* p = std::get_if<AbsorptionKernel::PorousThreshold>(&rep))
    return dini_classify(p->omega, theta_exponent(p->m, p->q, spec.N));
  if (const auto* pt = std::get_if<AbsorptionKernel::PowerTime>(&rep)) {
    // A pure power at the porous threshold plays the role of omega constant.
    if (const auto* pm = std::get_if<PorousAbsorption>(&spec.nonlinearity)) {
      if (std::abs(pt->alpha - (pm->q - pm->m) / (pm->m - 1.0)) <= 1e-12)
        return dini_classify(OmegaSpec::constant(1.0), theta_exponent(pm->m, pm->q, spec.N));
    }
  }
  return std::nullopt;
}

}  // namespace blowup
