#pragma once

// Line-oriented `key = value` run configuration with dotted section keys
// (problem.N, sweep.probes, ...). Every key has a default; unknown keys are
// rejected. See docs/config.md for the schema.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "blowup/dichotomy.hpp"
#include "blowup/energy.hpp"
#include "blowup/rdsolver.hpp"

namespace blowup {

struct ConfigKey {
  const char* key;
  const char* fallback;
  const char* doc;
};

// The schema: every accepted key with its default value.
const std::vector<ConfigKey>& config_schema();

class RunConfig {
 public:
  RunConfig() = default;

  static RunConfig parse(const std::string& text, const std::string& origin = "<string>");
  static RunConfig load(const std::string& path);

  // Throws ConfigError for keys outside the schema.
  void set(const std::string& key, const std::string& value);
  void merge(const RunConfig& other);  // other's explicit keys win

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  std::string get(const std::string& key) const;  // explicit value or default
  double get_double(const std::string& key) const;
  int get_int(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key) const;  // comma separated

  // Explicit keys only, sorted; parse(serialize()) reproduces the config.
  std::string serialize() const;
  // Every schema key with its effective value.
  std::map<std::string, std::string> effective() const;
  const std::map<std::string, std::string>& explicit_values() const { return values_; }

  bool operator==(const RunConfig& o) const { return values_ == o.values_; }

 private:
  std::map<std::string, std::string> values_;
};

// Named configurations shipped with the tool (sources in presets/*.conf).
std::vector<std::string> preset_names();
std::optional<std::string> preset_text(const std::string& name);
RunConfig load_preset(const std::string& name);

// Builders from a configuration.
ProblemSpec problem_from(const RunConfig& c);
RadialGrid grid_from(const RunConfig& c, const ProblemSpec& spec);
InitialData initial_from(const RunConfig& c);
SolveOptions solve_options_from(const RunConfig& c);
SweepConfig sweep_config_from(const RunConfig& c);
Thresholds thresholds_from(const RunConfig& c);
ScheduleParams schedule_params_from(const RunConfig& c);
MuSpec mu_from(const RunConfig& c);
std::vector<Probe> parse_probes(const std::string& text);  // "x@t;x@t"

}  // namespace blowup
