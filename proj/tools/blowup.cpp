// Command-line front end: one subcommand per module operation, each writing
// manifest.json plus its result tables into output.dir.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <omp.h>

#include "blowup/config.hpp"
#include "blowup/errors.hpp"
#include "blowup/io.hpp"
#include "blowup/serialize.hpp"

using namespace blowup;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIncomplete = 4;

// Short flags per subcommand; every schema key is also accepted as --key.
struct Alias {
  const char* flag;
  const char* key;
  bool boolean = false;
};

const std::vector<Alias> kProblemAliases = {
    {"--N", "problem.N"},         {"--equation", "problem.equation"}, {"--q", "problem.q"},
    {"--m", "problem.m"},         {"--kernel", "problem.kernel"},     {"--R", "problem.R"},
    {"--T", "problem.T"},         {"--cells", "grid.cells"},          {"--ratio", "grid.ratio"},
    {"--refine", "grid.refine"},  {"--rtol", "solve.rtol"},
};

std::vector<Alias> aliases_for(const std::string& cmd) {
  std::vector<Alias> a;
  auto add = [&](std::initializer_list<Alias> more) { a.insert(a.end(), more.begin(), more.end()); };
  if (cmd == "solve" || cmd == "sweep" || cmd == "classify" || cmd == "energy") a.insert(a.end(), kProblemAliases.begin(), kProblemAliases.end());
  if (cmd == "solve" || cmd == "energy")
    add({{"--initial", "initial.kind"}, {"--k", "initial.k"}, {"--t0", "initial.t0"}, {"--A", "initial.A"}});
  if (cmd == "sweep" || cmd == "classify")
    add({{"--probes", "sweep.probes"}, {"--t-warm", "sweep.t_warm"}, {"--ladder-lo", "sweep.ladder_lo"},
         {"--ladder-hi", "sweep.ladder_hi"}});
  if (cmd == "energy") add({{"--r", "energy.r"}, {"--tau", "energy.tau"}, {"--mu", "energy.mu"}});
  if (cmd == "profile")
    add({{"--N", "profile.N"}, {"--ell", "profile.ell"}, {"--tolerance", "profile.tolerance"}, {"--c", "profile.c"}});
  if (cmd == "thresholds")
    add({{"--omega", "thresholds.omega"}, {"--exponent", "thresholds.exponent"}, {"--count", "thresholds.count"}});
  if (cmd == "verify-lemma1")
    add({{"--sigma", "lemma1.sigma"},
         {"--ell", "lemma1.ell"},
         {"--N", "lemma1.N"},
         {"--tau", "lemma1.tau"},
         {"--tau-sweep", "lemma1.tau_sweep", true},
         {"--compare", "lemma1.compare", true}});
  if (cmd == "schedule")
    add({{"--omega", "schedule.omega"}, {"--eps0", "schedule.eps0"}, {"--k-min", "schedule.k_min"},
         {"--k-max", "schedule.k_max"}, {"--n", "schedule.n"}});
  return a;
}

struct Context {
  std::string command;
  RunConfig config;
  std::string preset;
  std::string config_file;
  std::string out_dir;
  bool plots = true;
  std::vector<std::string> outputs;
  json results = json::object();

  std::string path(const std::string& name) {
    outputs.push_back(name);
    return io::join_path(out_dir, name);
  }
};

std::string iso_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

// ------------------------------------------------------------------ solve

void overlay_plots(Context& ctx, const SolveResult& r) {
  if (!ctx.plots) return;
  std::vector<io::Series> curves;
  const std::size_t n = r.times.size();
  const std::size_t stride = std::max<std::size_t>(1, n / 6);
  for (std::size_t i = 0; i < n; i += stride) {
    const auto nodes = r.grid.nodes();
    curves.push_back({"t=" + io::format_double(r.times[i]), {nodes.begin(), nodes.end()}, r.fields[i]});
  }
  if ((n - 1) % stride != 0) {
    const auto nodes = r.grid.nodes();
    curves.push_back({"t=" + io::format_double(r.times.back()), {nodes.begin(), nodes.end()}, r.fields.back()});
  }
  io::write_text(ctx.path("profiles.svg"), io::svg_line_plot(curves, {"u(r, t)", "r", "u", false, false}));

  io::Series top{"max u", r.times, {}};
  io::Series bound{"flat bound", r.times, {}};
  for (std::size_t i = 0; i < n; ++i) {
    top.y.push_back(*std::max_element(r.fields[i].begin(), r.fields[i].end()));
    const FlatBound b = flat_supersolution(r.spec, r.times[i]);
    bound.y.push_back(b.infinite ? std::nan("") : b.value);
  }
  io::write_text(ctx.path("bound.svg"),
                 io::svg_line_plot({top, bound}, {"max u against the flat supersolution", "t", "u", true, false}));
}

SolveResult run_solve(Context& ctx, const ProblemSpec& spec) {
  const RadialGrid grid = grid_from(ctx.config, spec);
  const InitialData init = initial_from(ctx.config);
  SolveOptions opts = solve_options_from(ctx.config);
  return solve(spec, init, grid, opts);
}

int cmd_solve(Context& ctx) {
  const ProblemSpec spec = problem_from(ctx.config);
  const SolveResult r = run_solve(ctx, spec);

  io::CsvWriter csv(ctx.path("snapshots.csv"), {"t", "r", "u"});
  const auto nodes = r.grid.nodes();
  std::size_t violations = 0;
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    const FlatBound b = flat_supersolution(spec, r.times[i]);
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      csv.row(std::vector<double>{r.times[i], nodes[j], r.fields[i][j]});
      if (b.infinite) continue;
      if (spec.is_exponential() ? b.exceeded_by(r.fields[i][j], 0.0, 1e-6) : b.exceeded_by(r.fields[i][j], 1e-6, 0.0))
        ++violations;
    }
  }
  json diag = to_json(r.diagnostics);
  diag["times"] = json::array();
  for (double t : r.times) diag["times"].push_back(t);
  diag["initial"] = r.initial_description;
  diag["cells"] = r.grid.cells();
  diag["R"] = r.grid.radius();
  diag["supersolution_violations"] = violations;
  // Heat-equation runs carry their own oracle.
  const auto* c = std::get_if<AbsorptionKernel::Constant>(&spec.kernel.rep());
  if (c && c->value == 0.0 && !spec.is_porous() && !spec.is_exponential() && ctx.config.get("initial.kind") == "warm") {
    const double k = ctx.config.get_double("initial.k");
    double err = 0.0, peak = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      const double exact = k * heat_kernel(spec.N, nodes[j], r.times.back());
      err = std::max(err, std::abs(r.fields.back()[j] - exact));
      peak = std::max(peak, exact);
    }
    diag["heat_kernel_relative_error"] = err / peak;
  }
  io::write_json(ctx.path("diagnostics.json"), diag);
  overlay_plots(ctx, r);
  ctx.results = {{"steps", r.diagnostics.steps},
                 {"clamp_events", r.diagnostics.clamp_events},
                 {"supersolution_violations", violations}};
  return 0;
}

// ---------------------------------------------------------------- profile

int cmd_profile(Context& ctx) {
  const RunConfig& c = ctx.config;
  const int N = c.get_int("profile.N");
  const double ell = c.get_double("profile.ell");
  const double coeff = c.get_double("profile.c");
  const ProfileResult p = find_profile(N, ell, c.get_double("profile.tolerance"), c.get_double("profile.eta_max"));

  io::CsvWriter csv(ctx.path("profile.csv"), {"eta", "f", "fp"});
  for (std::size_t i = 0; i < p.eta.size(); ++i) csv.row(std::vector<double>{p.eta[i], p.f[i], p.fp[i]});
  const json j = {{"N", N},
                  {"ell", ell},
                  {"c", coeff},
                  {"alpha", alpha_ell(N, ell)},
                  {"amplitude_f0", p.amplitude},
                  {"A", vss_amplitude(N, ell, coeff)},
                  {"tail_C", p.tail_C},
                  {"tail_p", p.tail_p},
                  {"fit_range", {p.fit_lo, p.fit_hi}},
                  {"junction", p.junction},
                  {"delta_fit", p.delta_fit},
                  {"bracket_width", p.bracket_width},
                  {"bisection_steps", p.bisection_steps},
                  {"residual", profile_residual(p)}};
  io::write_json(ctx.path("profile.json"), j);
  if (ctx.plots)
    io::write_text(ctx.path("profile.svg"),
                   io::svg_line_plot({{"f, ell=" + io::format_double(ell), p.eta, p.f}},
                                     {"self-similar profile", "eta", "f", false, false}));
  ctx.results = {{"amplitude_f0", p.amplitude}, {"tail_p", p.tail_p}, {"delta_fit", p.delta_fit}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

// ----------------------------------------------------------- sweep/classify

std::string probe_label(const Probe& p) {
  return "u(x=" + io::format_double(p.x) + ";t=" + io::format_double(p.t) + ")";
}

void write_sweep(Context& ctx, const SweepTable& t) {
  std::vector<std::string> header{"k"};
  for (const auto& p : t.probes) header.push_back(probe_label(p));
  io::CsvWriter csv(ctx.path("sweep.csv"), header);
  for (std::size_t i = 0; i < t.ladder.size(); ++i) {
    std::vector<double> row{t.ladder[i]};
    row.insert(row.end(), t.values[i].begin(), t.values[i].end());
    csv.row(row);
  }
  io::write_json(ctx.path("sweep.json"), to_json(t));
  if (!ctx.plots) return;
  std::vector<io::Series> curves;
  for (std::size_t j = 0; j < t.probes.size(); ++j) {
    io::Series s{probe_label(t.probes[j]), t.ladder, {}};
    for (const auto& row : t.values) s.y.push_back(row[j]);
    curves.push_back(s);
    if (!t.bounds[j].infinite)
      curves.push_back({"U(" + io::format_double(t.probes[j].t) + ")", {t.ladder.front(), t.ladder.back()},
                        {t.bounds[j].value, t.bounds[j].value}});
  }
  io::write_text(ctx.path("sweep.svg"), io::svg_line_plot(curves, {"probe values against k", "k", "u_k", true, true}));
}

SweepTable run_sweep(Context& ctx, const ProblemSpec& spec) {
  const RadialGrid grid = grid_from(ctx.config, spec);
  const SweepConfig sc = sweep_config_from(ctx.config);
  SweepTable t = spec.is_porous() ? porous_sweep(spec, sc, grid) : sweep(spec, sc, grid);
  write_sweep(ctx, t);
  return t;
}

int cmd_sweep(Context& ctx) {
  const SweepTable t = run_sweep(ctx, problem_from(ctx.config));
  ctx.results = {{"complete", t.complete},
                 {"monotone", t.monotone},
                 {"bounded", t.bounded},
                 {"worst_monotone_drop", t.worst_monotone_drop}};
  if (!t.complete) {
    std::cerr << "sweep incomplete: " << t.failure << "\n";
    return kExitIncomplete;
  }
  return 0;
}

int cmd_classify(Context& ctx, const std::string& table_path) {
  SweepTable t;
  std::optional<DiniResult> dini;
  if (!table_path.empty()) {
    t = sweep_table_from_json(io::read_json(table_path));
    // The Dini cross-reference needs the kernel; use the configured one only
    // if it is the kernel the table was computed with.
    try {
      const ProblemSpec spec = problem_from(ctx.config);
      if (spec.kernel.describe() == t.kernel && describe(spec.nonlinearity) == t.equation)
        dini = dini_cross_reference(spec);
    } catch (const std::exception&) {
    }
  } else {
    const ProblemSpec spec = problem_from(ctx.config);
    t = run_sweep(ctx, spec);
    dini = dini_cross_reference(spec);
  }
  if (!t.complete) {
    std::cerr << "sweep incomplete: " << t.failure << "\n";
    return kExitIncomplete;
  }
  const Verdict v = classify(t, thresholds_from(ctx.config), dini);
  json j = to_json(v);
  if (dini) {
    const bool agrees = (v.cls == VerdictClass::Complete && dini->cls == DiniClass::Divergent) ||
                        (v.cls == VerdictClass::SinglePoint && dini->cls == DiniClass::Finite);
    j["agrees_with_dini"] = agrees;
  }
  j["equation"] = t.equation;
  j["kernel"] = t.kernel;
  io::write_json(ctx.path("verdict.json"), j);
  ctx.results = {{"class", to_string(v.cls)}};
  std::cout << to_string(v.cls) << ": " << v.reason << "\n";
  return 0;
}

// ----------------------------------------------------------------- energy

int cmd_energy(Context& ctx) {
  const ProblemSpec spec = problem_from(ctx.config);
  const SolveResult r = run_solve(ctx, spec);
  const double cutoff = ctx.config.get_double("energy.radius_cutoff");
  const EnergyReport rep = energy_report(r, ctx.config.get_double("energy.r"), ctx.config.get_double("energy.tau"),
                                         mu_from(ctx.config),
                                         cutoff > 0.0 ? cutoff : std::numeric_limits<double>::infinity());
  const json j = to_json(rep);
  io::write_json(ctx.path("energy.json"), j);
  ctx.results = j;
  std::cout << j.dump(2) << "\n";
  return 0;
}

// ------------------------------------------------------------- thresholds

int cmd_thresholds(Context& ctx) {
  const OmegaSpec omega = parse_omega(ctx.config.get("thresholds.omega"));
  const double e = ctx.config.get_double("thresholds.exponent");
  const DiniResult d = dini_classify(omega, e, geometric_cutoffs(ctx.config.get_int("thresholds.count")));
  json j = to_json(d);
  j["omega"] = omega.describe();
  j["exponent"] = e;
  io::write_json(ctx.path("thresholds.json"), j);
  if (!d.partials.empty()) {
    io::CsvWriter csv(ctx.path("partials.csv"), {"eps", "partial"});
    for (std::size_t i = 0; i < d.partials.size(); ++i) csv.row(std::vector<double>{d.cutoffs[i], d.partials[i]});
  }
  ctx.results = {{"class", j["class"]}, {"value", j["value"]}};
  std::cout << ctx.results.dump() << "\n";
  return 0;
}

// ---------------------------------------------------------- verify-lemma1

int cmd_lemma1(Context& ctx) {
  const RunConfig& c = ctx.config;
  const double sigma = c.get_double("lemma1.sigma");
  const double ell = c.get_double("lemma1.ell");
  const int N = c.get_int("lemma1.N");
  const BetaSearch bs = find_beta(sigma, ell, N);
  const double tau = c.get_double("lemma1.tau") > 0.0 ? c.get_double("lemma1.tau") : bs.tau_star;

  json j;
  j["sigma"] = sigma;
  j["ell"] = ell;
  j["N"] = N;
  j["alpha"] = alpha_ell(N, ell);
  j["beta"] = bs.beta;
  j["beta_closed_form"] = lemma1_beta_closed_form(ell, N);
  j["tau_star"] = bs.tau_star;
  j["bisection_scans"] = bs.scans;
  j["tau"] = tau;
  j["scan"] = to_json(verify_subsolution_inequality(sigma, tau, ell, N));

  if (c.get_bool("lemma1.tau_sweep")) {
    j["tau_sweep"] = json::array();
    for (double f : {0.25, 0.5, 0.75, 0.9, 1.0, 1.1, 1.25, 1.5, 2.0}) {
      const double t = f * bs.tau_star;
      json row = to_json(verify_subsolution_inequality(sigma, t, ell, N));
      row["tau"] = t;
      row["tau_over_beta_sigma"] = f;
      j["tau_sweep"].push_back(row);
    }
  }
  if (c.get_bool("lemma1.compare")) {
    ProblemSpec main;
    main.N = N;
    main.nonlinearity = ExponentialAbsorption{};
    main.kernel = AbsorptionKernel::lemma1(sigma);
    main.T = tau;
    main.R = default_outer_radius(N, tau);
    const ProblemSpec aux = lemma1_auxiliary_spec(main, sigma, tau, ell);
    RadialGrid grid(N, main.R, c.get_int("grid.cells"), c.get_double("grid.ratio"));
    SolveOptions opts = solve_options_from(c);
    if (opts.log_snapshots == 0) opts.log_snapshots = 24;
    const auto pair = solve_comparison_pair(
        main, aux, InitialData::warm_start(c.get_double("lemma1.k"), c.get_double("lemma1.t0")), grid, tau, opts);
    j["comparison"] = {{"min_difference", pair.report.min_difference},
                       {"max_difference", pair.report.max_difference},
                       {"t_at_min", pair.report.t_at_min},
                       {"r_at_min", pair.report.r_at_min},
                       {"points", pair.report.points}};
  }
  io::write_json(ctx.path("lemma1.json"), j);
  ctx.results = {{"beta", bs.beta}, {"holds_at_tau", j["scan"]["holds"]}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

// --------------------------------------------------------------- schedule

int cmd_schedule(Context& ctx) {
  const ScheduleParams p = schedule_params_from(ctx.config);
  const auto r_values = ctx.config.get_doubles("schedule.r_values");
  const auto rows = schedule(p, r_values.empty() ? std::nullopt : std::optional(r_values));
  io::CsvWriter csv(ctx.path("schedule.csv"), {"k", "log_M", "r_k", "tau_k", "bound", "tau_within_bound",
                                                "tau_partial", "bound_partial", "integral"});
  json arr = json::array();
  io::Series tau_s{"sum tau_j", {}, {}}, bound_s{"sum bound_j", {}, {}}, int_s{"integral", {}, {}};
  for (const auto& r : rows) {
    csv.row(std::vector<double>{double(r.k), r.log_M, r.r_k, r.tau_k, r.bound, r.tau_within_bound ? 1.0 : 0.0,
                                r.tau_partial, r.bound_partial, r.integral});
    arr.push_back({{"k", r.k},
                   {"log_M", number_to_json(r.log_M)},
                   {"M", r.M ? number_to_json(*r.M) : json(nullptr)},
                   {"r_k", r.r_k},
                   {"tau_k", r.tau_k},
                   {"bound", r.bound},
                   {"tau_within_bound", r.tau_within_bound},
                   {"tau_partial", r.tau_partial},
                   {"bound_partial", r.bound_partial},
                   {"integral", r.integral}});
    for (auto* s : {&tau_s, &bound_s, &int_s}) s->x.push_back(r.k);
    tau_s.y.push_back(r.tau_partial);
    bound_s.y.push_back(r.bound_partial);
    int_s.y.push_back(r.integral);
  }
  io::write_json(ctx.path("schedule.json"), {{"omega", p.omega.describe()}, {"rows", arr}});
  if (ctx.plots)
    io::write_text(ctx.path("schedule.svg"),
                   io::svg_line_plot({tau_s, bound_s, int_s}, {"partial sums against k", "k", "sum", false, false}));
  const auto& last = rows.back();
  ctx.results = {{"tau_partial", last.tau_partial}, {"bound_partial", last.bound_partial}, {"integral", last.integral}};
  return 0;
}

// ----------------------------------------------------------------- report

int cmd_report(Context& ctx, const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw ConfigError("report: no such directory " + dir);
  std::vector<fs::path> manifests;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file() && e.path().filename() == "manifest.json") manifests.push_back(e.path());
  std::sort(manifests.begin(), manifests.end());

  json runs = json::array();
  std::ostringstream md;
  md << "# Run report\n\n| directory | command | preset | status | wall s | results |\n|---|---|---|---|---|---|\n";
  for (const auto& m : manifests) {
    const json j = io::read_json(m.string());
    if (j.value("command", "") == "report") continue;
    const std::string rel = fs::relative(m.parent_path(), dir).string();
    json entry = {{"directory", rel},
                  {"command", j.value("command", "")},
                  {"preset", j.value("preset", "")},
                  {"status", j.value("status", "")},
                  {"wall_seconds", j.value("wall_seconds", 0.0)},
                  {"results", j.value("results", json::object())}};
    md << "| " << rel << " | " << entry["command"].get<std::string>() << " | " << entry["preset"].get<std::string>()
       << " | " << entry["status"].get<std::string>() << " | " << entry["wall_seconds"].get<double>() << " | "
       << entry["results"].dump() << " |\n";
    runs.push_back(entry);
  }
  io::write_json(ctx.path("report.json"), {{"runs", runs}});
  io::write_text(ctx.path("report.md"), md.str());
  ctx.results = {{"runs", runs.size()}};
  std::cout << md.str();
  return 0;
}

// ---------------------------------------------------------------- driver

void write_manifest(const Context& ctx, const std::vector<std::string>& argv, const std::string& status,
                    int exit_code, double wall, const std::string& error) {
  json j;
  j["schema_version"] = io::kManifestSchemaVersion;
  j["tool"] = "blowup";
  j["version"] = BLOWUP_VERSION;
  j["compiler"] = __VERSION__;
  j["openmp_max_threads"] = omp_get_max_threads();
  j["sweep_workers"] = sweep_workers_from_env();
  j["command"] = ctx.command;
  j["argv"] = argv;
  j["preset"] = ctx.preset;
  j["config_file"] = ctx.config_file;
  j["config"] = ctx.config.effective();
  j["explicit_config"] = ctx.config.explicit_values();
  j["started"] = iso_now();
  j["wall_seconds"] = wall;
  j["status"] = status;
  j["exit_code"] = exit_code;
  if (!error.empty()) j["error"] = error;
  j["outputs"] = ctx.outputs;
  j["results"] = ctx.results;
  io::write_json(io::join_path(ctx.out_dir, "manifest.json"), j);
}

const std::vector<std::pair<std::string, std::string>> kCommands = {
    {"solve", "integrate one problem and store snapshots"},
    {"profile", "self-similar profile by shooting"},
    {"sweep", "k-ladder of warm starts sampled at probe points"},
    {"classify", "sweep (or read one) and classify the trend"},
    {"energy", "local energy functionals of a solve"},
    {"thresholds", "Dini-type integral of omega"},
    {"verify-lemma1", "subsolution scan, beta search, comparison pair"},
    {"schedule", "M_k, tau_k and partial sums against the integral"},
    {"report", "collect manifests under a directory"}};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Initial blow-up of absorption-diffusion equations: solver, sweeps and diagnostics"};
  app.require_subcommand(0, 1);
  bool list = false;
  app.add_flag("--list-presets", list, "print the shipped presets and exit");

  struct Sub {
    CLI::App* app = nullptr;
    std::string preset, config_file, out, table, dir;
    bool no_plots = false, print_config = false;
    std::vector<std::pair<CLI::Option*, std::string>> keyed;
    std::vector<std::pair<CLI::Option*, std::string>> flags;
  };
  std::deque<std::string> storage;
  std::map<std::string, Sub> subs;
  for (const auto& [name, what] : kCommands) {
    Sub& s = subs[name];
    s.app = app.add_subcommand(name, what);
    s.app->add_option("--preset", s.preset, "start from a shipped preset");
    s.app->add_option("--config", s.config_file, "key = value file, applied after the preset");
    s.app->add_option("--out", s.out, "output directory (output.dir)");
    s.app->add_flag("--no-plots", s.no_plots, "skip SVG output");
    s.app->add_flag("--print-config", s.print_config, "print the effective configuration and exit");
    if (name == "classify") s.app->add_option("--table", s.table, "classify an existing sweep.json");
    if (name == "report") s.app->add_option("--dir", s.dir, "directory scanned for manifests")->required();
    for (const auto& a : aliases_for(name)) {
      if (a.boolean) {
        s.flags.emplace_back(s.app->add_flag(a.flag)->description(std::string("sets ") + a.key + " = true"), a.key);
      } else {
        storage.emplace_back();
        s.keyed.emplace_back(s.app->add_option(a.flag, storage.back(), a.key), a.key);
      }
    }
    for (const auto& k : config_schema()) {
      storage.emplace_back();
      s.keyed.emplace_back(s.app->add_option(std::string("--") + k.key, storage.back(), k.doc)->group("Keys"), k.key);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (list) {
    for (const auto& n : preset_names()) std::cout << n << "\n";
    return 0;
  }
  const std::string* chosen = nullptr;
  for (const auto& entry : kCommands)
    if (subs[entry.first].app->parsed()) chosen = &entry.first;
  if (!chosen) {
    std::cerr << app.help();
    return kExitConfig;
  }
  Sub& s = subs[*chosen];
  Context ctx;
  ctx.command = *chosen;
  const std::vector<std::string> args(argv, argv + argc);
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

  int code = 0;
  std::string status = "ok", error;
  try {
    if (!s.preset.empty()) {
      ctx.preset = s.preset;
      ctx.config = load_preset(s.preset);
    }
    if (!s.config_file.empty()) {
      ctx.config_file = s.config_file;
      ctx.config.merge(RunConfig::load(s.config_file));
    }
    for (const auto& [opt, key] : s.keyed)
      if (opt->count() > 0) ctx.config.set(key, opt->as<std::string>());
    for (const auto& [opt, key] : s.flags)
      if (opt->count() > 0) ctx.config.set(key, "true");
    if (!s.out.empty()) ctx.config.set("output.dir", s.out);
    if (s.no_plots) ctx.config.set("output.plots", "false");
    if (s.print_config) {
      for (const auto& [k, v] : ctx.config.effective()) std::cout << k << " = " << v << "\n";
      return 0;
    }
    ctx.out_dir = ctx.config.get("output.dir");
    ctx.plots = ctx.config.get_bool("output.plots");
    io::ensure_directory(ctx.out_dir);

    const std::string& c = ctx.command;
    if (c == "solve") code = cmd_solve(ctx);
    else if (c == "profile") code = cmd_profile(ctx);
    else if (c == "sweep") code = cmd_sweep(ctx);
    else if (c == "classify") code = cmd_classify(ctx, s.table);
    else if (c == "energy") code = cmd_energy(ctx);
    else if (c == "thresholds") code = cmd_thresholds(ctx);
    else if (c == "verify-lemma1") code = cmd_lemma1(ctx);
    else if (c == "schedule") code = cmd_schedule(ctx);
    else code = cmd_report(ctx, s.dir);
    if (code == kExitIncomplete) status = "incomplete";
  } catch (const ConfigError& e) {
    code = kExitConfig, status = "config-error", error = e.what();
  } catch (const DomainError& e) {
    code = kExitConfig, status = "config-error", error = e.what();
  } catch (const json::exception& e) {
    code = kExitConfig, status = "config-error", error = e.what();
  } catch (const std::exception& e) {
    code = kExitNumerical, status = "numerical-failure", error = e.what();
  }
  if (!error.empty()) std::cerr << "error: " << error << "\n";
  if (!ctx.out_dir.empty()) {
    try {
      write_manifest(ctx, args, status, code, elapsed(), error);
    } catch (const std::exception& e) {
      std::cerr << "error: could not write manifest: " << e.what() << "\n";
    }
  }
  return code;
}
