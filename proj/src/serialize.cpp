#include "blowup/serialize.hpp"

#include <cmath>
#include <limits>

#include "blowup/errors.hpp"

namespace blowup {

using nlohmann::json;

json number_to_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw ConfigError("expected a number, got " + j.dump());
}

namespace {

json numbers(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number_to_json(x));
  return a;
}

std::vector<double> numbers_from(const json& a) {
  std::vector<double> out;
  for (const auto& x : a) out.push_back(number_from_json(x));
  return out;
}

}  // namespace

json to_json(const SweepTable& t) {
  json j;
  j["equation"] = t.equation;
  j["kernel"] = t.kernel;
  j["probes"] = json::array();
  for (const auto& p : t.probes) j["probes"].push_back({{"x", number_to_json(p.x)}, {"t", number_to_json(p.t)}});
  j["ladder"] = numbers(t.ladder);
  j["values"] = json::array();
  for (const auto& row : t.values) j["values"].push_back(numbers(row));
  j["bounds"] = json::array();
  for (const auto& b : t.bounds) j["bounds"].push_back({{"value", number_to_json(b.value)}, {"infinite", b.infinite}});
  j["diagnostics"] = json::array();
  for (const auto& d : t.diagnostics)
    j["diagnostics"].push_back({{"ok", d.ok},
                                {"error", d.error},
                                {"steps", d.steps},
                                {"rejected_steps", d.rejected_steps},
                                {"clamp_events", d.clamp_events},
                                {"max_u", number_to_json(d.max_u)},
                                {"wall_seconds", d.wall_seconds}});
  j["complete"] = t.complete;
  j["failure"] = t.failure;
  j["monotone"] = t.monotone;
  j["worst_monotone_drop"] = number_to_json(t.worst_monotone_drop);
  j["bounded"] = t.bounded;
  j["cells"] = t.cells;
  j["R"] = number_to_json(t.R);
  return j;
}

SweepTable sweep_table_from_json(const json& j) {
  try {
    SweepTable t;
    t.equation = j.at("equation").get<std::string>();
    t.kernel = j.at("kernel").get<std::string>();
    for (const auto& p : j.at("probes")) t.probes.push_back({number_from_json(p.at("x")), number_from_json(p.at("t"))});
    t.ladder = numbers_from(j.at("ladder"));
    for (const auto& row : j.at("values")) t.values.push_back(numbers_from(row));
    for (const auto& b : j.at("bounds"))
      t.bounds.push_back({number_from_json(b.at("value")), b.at("infinite").get<bool>()});
    for (const auto& d : j.at("diagnostics")) {
      EntryDiagnostics e;
      e.ok = d.at("ok").get<bool>();
      e.error = d.at("error").get<std::string>();
      e.steps = d.at("steps").get<std::size_t>();
      e.rejected_steps = d.at("rejected_steps").get<std::size_t>();
      e.clamp_events = d.at("clamp_events").get<std::size_t>();
      e.max_u = number_from_json(d.at("max_u"));
      e.wall_seconds = d.at("wall_seconds").get<double>();
      t.diagnostics.push_back(e);
    }
    t.complete = j.at("complete").get<bool>();
    t.failure = j.at("failure").get<std::string>();
    t.monotone = j.at("monotone").get<bool>();
    t.worst_monotone_drop = number_from_json(j.at("worst_monotone_drop"));
    t.bounded = j.at("bounded").get<bool>();
    t.cells = j.at("cells").get<int>();
    t.R = number_from_json(j.at("R"));
    if (t.values.size() != t.ladder.size() || t.bounds.size() != t.probes.size())
      throw ConfigError("sweep table dimensions do not match");
    for (const auto& row : t.values)
      if (row.size() != t.probes.size()) throw ConfigError("sweep table dimensions do not match");
    return t;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed sweep table: ") + e.what());
  }
}

json to_json(const Verdict& v) {
  json j;
  j["class"] = to_string(v.cls);
  j["reason"] = v.reason;
  j["increments"] = numbers(v.increments);
  j["top_ratio"] = numbers(v.top_ratio);
  j["ratio_increasing"] = v.ratio_increasing;
  j["dini"] = v.dini ? json(*v.dini) : json(nullptr);
  j["thresholds"] = {{"complete_increment", v.thresholds.complete_increment},
                     {"single_increment", v.thresholds.single_increment},
                     {"saturation_ratio", v.thresholds.saturation_ratio},
                     {"origin_radius", v.thresholds.origin_radius}};
  return j;
}

json to_json(const DiniResult& d) {
  json j;
  j["class"] = to_string(d.cls);
  j["value"] = d.value ? number_to_json(*d.value) : json(nullptr);
  j["analytic"] = d.analytic;
  j["cutoffs"] = numbers(d.cutoffs);
  j["partials"] = numbers(d.partials);
  return j;
}

json to_json(const EnergyReport& r) {
  return {{"r", r.r},
          {"tau", r.tau},
          {"I1", number_to_json(r.I1)},
          {"I2", number_to_json(r.I2)},
          {"I3", number_to_json(r.I3)},
          {"f_mu", number_to_json(r.f_mu)},
          {"E1_mu", number_to_json(r.E1_mu)},
          {"E2", number_to_json(r.E2)},
          {"H_r", number_to_json(r.H_r)},
          {"mu", r.mu},
          {"mu_spec", r.mu_description},
          {"radius_cutoff", number_to_json(r.radius_cutoff)}};
}

json to_json(const SolveDiagnostics& d) {
  return {{"steps", d.steps},
          {"rejected_steps", d.rejected_steps},
          {"newton_iterations", d.newton_iterations},
          {"clamp_events", d.clamp_events},
          {"clamped", d.clamped},
          {"max_u", number_to_json(d.max_u)},
          {"mass", numbers(d.mass)},
          {"wall_seconds", d.wall_seconds}};
}

json to_json(const SubsolutionScan& s) {
  return {{"holds", s.holds},
          {"c", number_to_json(s.c)},
          {"witness_t", s.witness_t ? number_to_json(*s.witness_t) : json(nullptr)},
          {"witness_rho", s.witness_rho ? number_to_json(*s.witness_rho) : json(nullptr)},
          {"worst_log_margin", number_to_json(s.worst_log_margin)},
          {"points", s.points}};
}

}  // namespace blowup
