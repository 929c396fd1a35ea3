#include "blowup/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "blowup/errors.hpp"

namespace blowup {

// Defined in the generated presets source.
const std::vector<std::pair<std::string, std::string>>& embedded_presets();

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const char* first = v.data();
  const char* last = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) throw ConfigError(key + ": '" + v + "' is not a number");
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

const std::vector<ConfigKey>& config_schema() {
  static const std::vector<ConfigKey> schema = {
      {"problem.N", "1", "space dimension"},
      {"problem.equation", "power", "power | exponential | porous"},
      {"problem.q", "2", "absorption exponent (power, porous)"},
      {"problem.m", "2", "diffusion exponent (porous)"},
      {"problem.kernel", "exp-omega:omega=constant:sigma=1", "absorption kernel h(t)"},
      {"problem.R", "0", "outer radius; 0 picks max(6 sqrt(T), 1) sqrt(N)"},
      {"problem.T", "1", "time horizon"},
      {"grid.cells", "200", "radial cells"},
      {"grid.ratio", "1.01", "geometric growth of the cell size"},
      {"grid.refine", "0", "number of refinements applied to the grid"},
      {"initial.kind", "warm", "warm | bump | flat"},
      {"initial.k", "1", "initial mass (warm, bump)"},
      {"initial.t0", "0.001", "warm start time, or start time of flat data"},
      {"initial.log_M", "0", "ln M of the bump amplitude M^(1/2) k^(N/2)"},
      {"initial.A", "1", "flat initial value"},
      {"solve.rtol", "1e-6", "step-doubling tolerance"},
      {"solve.theta", "1", "diffusion theta (1/2 .. 1)"},
      {"solve.dt_max", "0", "largest step; 0 means (T - t0)/20"},
      {"solve.snapshots", "", "extra output times, comma separated"},
      {"solve.log_snapshots", "0", "number of log-spaced output times"},
      {"solve.parallel", "false", "OpenMP node kernels"},
      {"solve.check_resolution", "true", "refuse grids that do not resolve the initial data"},
      {"sweep.probes", "0.5@0.05;1@0.05", "probe points x@t separated by ';'"},
      {"sweep.ladder_lo", "1", "smallest k = 10^lo"},
      {"sweep.ladder_hi", "6", "largest k = 10^hi"},
      {"sweep.per_decade", "1", "ladder points per decade"},
      {"sweep.t_warm", "0.001", "warm start time of every u_k"},
      {"sweep.shared_steps", "true", "replay the largest-k step sequence for all k"},
      {"classify.complete_increment", "0.05", "last-decade growth for complete"},
      {"classify.single_increment", "0.01", "last-decade growth bound off the origin"},
      {"classify.saturation_ratio", "0.99", "u / U at top k counting as saturated"},
      {"classify.origin_radius", "0", "probes with x at most this are on-origin"},
      {"profile.N", "1", "dimension of the profile equation"},
      {"profile.ell", "2", "exponent ell"},
      {"profile.tolerance", "1e-12", "bisection bracket width"},
      {"profile.eta_max", "20", "shooting horizon"},
      {"profile.c", "1", "coefficient c of the self-similar field"},
      {"energy.r", "0.1", "lower time limit r of Q_r"},
      {"energy.tau", "0", "exterior radius tau"},
      {"energy.mu", "constant:0", "constant:MU or linear:SLOPE,OFFSET"},
      {"energy.radius_cutoff", "0", "stop spatial integrals here; 0 means R"},
      {"thresholds.omega", "power:a=1,alpha=0.5", "omega for the Dini test"},
      {"thresholds.exponent", "0.5", "exponent e in int omega^e / t"},
      {"thresholds.count", "40", "number of cutoffs 2^-j"},
      {"lemma1.sigma", "1", "sigma of the lemma1 kernel"},
      {"lemma1.ell", "2", "exponent ell of the auxiliary equation"},
      {"lemma1.N", "1", "dimension"},
      {"lemma1.tau", "0", "tau; 0 uses beta sigma from the search"},
      {"lemma1.tau_sweep", "false", "scan a range of tau around beta sigma"},
      {"lemma1.compare", "false", "also run the comparison pair"},
      {"lemma1.k", "100", "initial mass of the comparison pair"},
      {"lemma1.t0", "0.01", "warm start time of the comparison pair"},
      {"schedule.eps0", "0.1", "eps0 in (0, 1/e)"},
      {"schedule.c2", "1", "constant c2"},
      {"schedule.c4", "1", "constant c4"},
      {"schedule.c8", "1", "constant c8"},
      {"schedule.c9", "1", "constant c9"},
      {"schedule.c10", "1", "constant c10"},
      {"schedule.q", "2", "exponent q in the b_k relation"},
      {"schedule.N", "1", "dimension in the b_k relation"},
      {"schedule.k_min", "1", "first k"},
      {"schedule.k_max", "20", "last k"},
      {"schedule.n", "1", "partial sums start at j = n"},
      {"schedule.omega", "constant:sigma=1", "omega of the schedule"},
      {"schedule.r_values", "", "r_k per k, comma separated; empty uses b_k"},
      {"output.dir", "out", "output directory"},
      {"output.plots", "true", "write SVG plots"},
  };
  return schema;
}

RunConfig RunConfig::parse(const std::string& text, const std::string& origin) {
  RunConfig c;
  std::istringstream is(text);
  std::string line;
  int n = 0;
  while (std::getline(is, line)) {
    ++n;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(n) + ": expected key = value");
    c.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

void RunConfig::set(const std::string& key, const std::string& value) {
  const auto& schema = config_schema();
  const bool known = std::any_of(schema.begin(), schema.end(), [&](const ConfigKey& k) { return key == k.key; });
  if (!known) throw ConfigError("unknown configuration key '" + key + "'");
  values_[key] = value;
}

void RunConfig::merge(const RunConfig& other) {
  for (const auto& [k, v] : other.values_) values_[k] = v;
}

std::string RunConfig::get(const std::string& key) const {
  if (auto it = values_.find(key); it != values_.end()) return it->second;
  for (const auto& k : config_schema())
    if (key == k.key) return k.fallback;
  throw ConfigError("unknown configuration key '" + key + "'");
}

double RunConfig::get_double(const std::string& key) const { return to_double(key, get(key)); }

int RunConfig::get_int(const std::string& key) const {
  const double v = get_double(key);
  if (v != static_cast<int>(v)) throw ConfigError(key + " must be an integer");
  return static_cast<int>(v);
}

bool RunConfig::get_bool(const std::string& key) const {
  const std::string v = get(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": '" + v + "' is not a boolean");
}

std::vector<double> RunConfig::get_doubles(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split(get(key), ',')) out.push_back(to_double(key, item));
  return out;
}

std::string RunConfig::serialize() const {
  std::ostringstream os;
  for (const auto& [k, v] : values_) os << k << " = " << v << "\n";
  return os.str();
}

std::map<std::string, std::string> RunConfig::effective() const {
  std::map<std::string, std::string> out;
  for (const auto& k : config_schema()) out[k.key] = get(k.key);
  return out;
}

// ---------------------------------------------------------------- presets

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [name, text] : embedded_presets()) out.push_back(name);
  return out;
}

std::optional<std::string> preset_text(const std::string& name) {
  for (const auto& [n, text] : embedded_presets())
    if (n == name) return text;
  return std::nullopt;
}

RunConfig load_preset(const std::string& name) {
  const auto text = preset_text(name);
  if (!text) throw ConfigError("unknown preset '" + name + "'");
  return RunConfig::parse(*text, "preset " + name);
}

// ---------------------------------------------------------------- builders

ProblemSpec problem_from(const RunConfig& c) {
  ProblemSpec spec;
  spec.N = c.get_int("problem.N");
  const std::string eq = c.get("problem.equation");
  if (eq == "power") spec.nonlinearity = PowerAbsorption{c.get_double("problem.q")};
  else if (eq == "exponential") spec.nonlinearity = ExponentialAbsorption{};
  else if (eq == "porous") spec.nonlinearity = PorousAbsorption{c.get_double("problem.m"), c.get_double("problem.q")};
  else throw ConfigError("problem.equation must be power, exponential or porous");
  spec.kernel = parse_kernel(c.get("problem.kernel"));
  spec.T = c.get_double("problem.T");
  const double R = c.get_double("problem.R");
  spec.R = R > 0.0 ? R : default_outer_radius(spec.N, spec.T);
  try {
    spec.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return spec;
}

RadialGrid grid_from(const RunConfig& c, const ProblemSpec& spec) {
  RadialGrid g(spec.N, spec.R, c.get_int("grid.cells"), c.get_double("grid.ratio"));
  for (int i = 0; i < c.get_int("grid.refine"); ++i) g = g.refined();
  return g;
}

InitialData initial_from(const RunConfig& c) {
  const std::string kind = c.get("initial.kind");
  if (kind == "warm") return InitialData::warm_start(c.get_double("initial.k"), c.get_double("initial.t0"));
  if (kind == "bump") return InitialData::bump(c.get_double("initial.k"), c.get_double("initial.log_M"));
  if (kind == "flat") return InitialData::flat(c.get_double("initial.A"), c.has("initial.t0") ? c.get_double("initial.t0") : 0.0);
  throw ConfigError("initial.kind must be warm, bump or flat");
}

SolveOptions solve_options_from(const RunConfig& c) {
  SolveOptions o;
  o.rtol = c.get_double("solve.rtol");
  o.theta = c.get_double("solve.theta");
  o.dt_max = c.get_double("solve.dt_max");
  o.snapshot_times = c.get_doubles("solve.snapshots");
  o.log_snapshots = c.get_int("solve.log_snapshots");
  o.exec = c.get_bool("solve.parallel") ? pointwise::Exec::Parallel : pointwise::Exec::Serial;
  o.check_resolution = c.get_bool("solve.check_resolution");
  return o;
}

std::vector<Probe> parse_probes(const std::string& text) {
  std::vector<Probe> out;
  for (const auto& item : split(text, ';')) {
    const auto at = item.find('@');
    if (at == std::string::npos) throw ConfigError("probe '" + item + "' is not of the form x@t");
    out.push_back({to_double("sweep.probes", trim(item.substr(0, at))),
                   to_double("sweep.probes", trim(item.substr(at + 1)))});
  }
  if (out.empty()) throw ConfigError("sweep.probes is empty");
  return out;
}

SweepConfig sweep_config_from(const RunConfig& c) {
  SweepConfig s;
  s.probes = parse_probes(c.get("sweep.probes"));
  s.ladder = geometric_ladder(c.get_int("sweep.ladder_lo"), c.get_int("sweep.ladder_hi"),
                              c.get_int("sweep.per_decade"));
  s.t_warm = c.get_double("sweep.t_warm");
  s.shared_steps = c.get_bool("sweep.shared_steps");
  s.solve = solve_options_from(c);
  return s;
}

Thresholds thresholds_from(const RunConfig& c) {
  Thresholds t;
  t.complete_increment = c.get_double("classify.complete_increment");
  t.single_increment = c.get_double("classify.single_increment");
  t.saturation_ratio = c.get_double("classify.saturation_ratio");
  t.origin_radius = c.get_double("classify.origin_radius");
  return t;
}

ScheduleParams schedule_params_from(const RunConfig& c) {
  ScheduleParams p;
  p.eps0 = c.get_double("schedule.eps0");
  p.c2 = c.get_double("schedule.c2");
  p.c4 = c.get_double("schedule.c4");
  p.c8 = c.get_double("schedule.c8");
  p.c9 = c.get_double("schedule.c9");
  p.c10 = c.get_double("schedule.c10");
  p.q = c.get_double("schedule.q");
  p.N = c.get_int("schedule.N");
  p.k_min = c.get_int("schedule.k_min");
  p.k_max = c.get_int("schedule.k_max");
  p.n = c.get_int("schedule.n");
  p.omega = parse_omega(c.get("schedule.omega"));
  p.validate();
  return p;
}

MuSpec mu_from(const RunConfig& c) {
  const std::string text = c.get("energy.mu");
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const auto args = colon == std::string::npos ? std::vector<std::string>{} : split(text.substr(colon + 1), ',');
  if (kind == "constant" && args.size() == 1) return MuSpec::constant(to_double("energy.mu", args[0]));
  if (kind == "linear" && args.size() == 2)
    return MuSpec::linear(to_double("energy.mu", args[0]), to_double("energy.mu", args[1]));
  throw ConfigError("energy.mu must be constant:MU or linear:SLOPE,OFFSET");
}

}  // namespace blowup
