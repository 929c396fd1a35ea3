#pragma once

// k-sweeps of approximate fundamental solutions u_k (initial mass k at the
// origin) and a trend classifier: does lim u_k fill space (complete initial
// blow-up) or stay concentrated at the origin (single-point)?

#include <optional>
#include <string>
#include <vector>

#include "blowup/rdsolver.hpp"
#include "blowup/thresholds.hpp"

namespace blowup {

struct Probe {
  double x = 0.0;
  double t = 0.0;
};

// 10^lo .. 10^hi with `per_decade` points per decade.
std::vector<double> geometric_ladder(int lo_exp = 1, int hi_exp = 6, int per_decade = 1);

// Worker count from BLOWUP_WORKERS; 1 when unset or unparsable.
int sweep_workers_from_env();

struct SweepConfig {
  std::vector<Probe> probes;
  std::vector<double> ladder = geometric_ladder();
  double t_warm = 1e-3;  // warm start time of every u_k
  SolveOptions solve;
  int workers = 0;  // 0: sweep_workers_from_env()
  // Replay the step sequence of the largest k for the others, so the
  // discrete comparison principle orders the columns exactly.
  bool shared_steps = true;
};

struct EntryDiagnostics {
  bool ok = false;
  std::string error;
  std::size_t steps = 0;
  std::size_t rejected_steps = 0;
  std::size_t clamp_events = 0;
  double max_u = 0.0;
  double wall_seconds = 0.0;
};

struct SweepTable {
  std::string equation;
  std::string kernel;
  std::vector<Probe> probes;
  std::vector<double> ladder;
  std::vector<std::vector<double>> values;  // [k index][probe index], NaN if failed
  std::vector<FlatBound> bounds;            // flat supersolution at each probe time
  std::vector<EntryDiagnostics> diagnostics;
  bool complete = false;
  std::string failure;
  bool monotone = true;
  double worst_monotone_drop = 0.0;  // largest relative decrease along a column
  bool bounded = true;               // every value below its flat bound
  int cells = 0;
  double R = 0.0;
};

inline constexpr double kMonotoneTolerance = 1e-8;

SweepTable sweep(const ProblemSpec& spec, const SweepConfig& config, const RadialGrid& grid);

// As sweep, restricted to q > m > 1 with a porous-threshold kernel or the
// pure power h = c t^((q-m)/(m-1)).
SweepTable porous_sweep(const ProblemSpec& spec, const SweepConfig& config, const RadialGrid& grid);

// Throws Inadmissible when fundamental solutions are not expected to exist
// (H infinite, or for the exponential equation t^(N/2)(-ln h) not growing).
void check_sweep_admissible(const ProblemSpec& spec, const SweepConfig& config);

enum class VerdictClass { Complete, SinglePoint, Inconclusive };
std::string to_string(VerdictClass c);

struct Thresholds {
  double complete_increment = 0.05;  // last-decade growth at every probe
  double single_increment = 0.01;    // last-decade growth off the origin
  double saturation_ratio = 0.99;    // u_k / U at top k counting as saturated at U
  double origin_radius = 0.0;        // probes with x <= this count as on-origin
};

struct Verdict {
  VerdictClass cls = VerdictClass::Inconclusive;
  std::string reason;
  std::vector<double> increments;    // per probe, last decade
  std::vector<double> top_ratio;     // per probe, u_kmax / bound (NaN if bound infinite)
  std::vector<bool> ratio_increasing;
  std::optional<std::string> dini;   // cross-reference from the kernel family
  Thresholds thresholds;
};

Verdict classify(const SweepTable& table, const Thresholds& thresholds = {},
                 const std::optional<DiniResult>& dini = std::nullopt);

// Dini classification matching the kernel family (exponent 1/2 for the
// semilinear families, theta for porous ones), if the family has one.
std::optional<DiniResult> dini_cross_reference(const ProblemSpec& spec);

}  // namespace blowup
