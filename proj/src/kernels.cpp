#include "blowup/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "blowup/errors.hpp"
#include "blowup/quadrature.hpp"

namespace blowup {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kLogMax = std::log(std::numeric_limits<double>::max());

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// ln(b^e - a^e)/... helper: ln(b^p - a^p) for 0 <= a < b, p > 0.
double log_power_difference(double a, double b, double p) {
  const double lb = p * std::log(b);
  if (a <= 0.0) return lb;
  return lb + std::log(-std::expm1(p * (std::log(a) - std::log(b))));
}

// ln of int_a^b t^e dt, e > -1 (a may be 0).
double log_power_integral(double a, double b, double e) {
  if (e <= -1.0) return kInf;
  return log_power_difference(a, b, e + 1.0) - std::log(e + 1.0);
}

double log_trapezoid_table(const Table& table, double a, double b) {
  // h(t) linear to zero below the first abscissa.
  auto h = [&](double t) {
    if (t <= table.front()) return table.values().front() * t / table.front();
    return table(t);
  };
  std::vector<double> knots{a};
  for (double t : table.abscissae())
    if (t > a && t < b) knots.push_back(t);
  if (a < table.front() && table.front() < b &&
      std::find(knots.begin(), knots.end(), table.front()) == knots.end())
    knots.push_back(table.front());
  knots.push_back(b);
  std::sort(knots.begin(), knots.end());
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i)
    sum += 0.5 * (h(knots[i]) + h(knots[i + 1])) * (knots[i + 1] - knots[i]);
  return sum > 0.0 ? std::log(sum) : kNegInf;
}

std::map<std::string, std::string> parse_params(const std::string& body, char sep) {
  std::map<std::string, std::string> out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key=value in '" + item + "'");
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

double param(const std::map<std::string, std::string>& p, const std::string& key,
             std::optional<double> fallback = std::nullopt) {
  const auto it = p.find(key);
  if (it == p.end()) {
    if (fallback) return *fallback;
    throw ConfigError("missing parameter '" + key + "'");
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("parameter '" + key + "' is not a number: " + it->second);
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------- Table

Table::Table(std::vector<double> t, std::vector<double> v) : t_(std::move(t)), v_(std::move(v)) {
  if (t_.size() != v_.size() || t_.size() < 2)
    throw DomainError("table needs at least two (t, value) rows");
  for (std::size_t i = 0; i < t_.size(); ++i) {
    if (!(t_[i] > 0.0)) throw DomainError("table abscissae must be positive");
    if (i > 0 && !(t_[i] > t_[i - 1])) throw DomainError("table abscissae must increase strictly");
  }
}

double Table::operator()(double t) const {
  if (t < t_.front() || t > t_.back())
    throw InsufficientData("table does not cover t = " + fmt(t));
  const auto it = std::upper_bound(t_.begin(), t_.end(), t);
  if (it == t_.end()) return v_.back();
  const std::size_t i = static_cast<std::size_t>(it - t_.begin()) - 1;
  const double w = (t - t_[i]) / (t_[i + 1] - t_[i]);
  return (1.0 - w) * v_[i] + w * v_[i + 1];
}

Table read_table_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open table file " + path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("table file is empty: " + path);
  std::vector<double> t, v;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double a = 0.0, b = 0.0;
    if (!(row >> a >> b))
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected two numbers");
    t.push_back(a);
    v.push_back(b);
  }
  return Table(std::move(t), std::move(v));
}

// ---------------------------------------------------------------- OmegaSpec

OmegaSpec OmegaSpec::constant(double sigma) {
  if (!(sigma > 0.0)) throw DomainError("omega constant: sigma must be positive");
  return OmegaSpec(Constant{sigma});
}

OmegaSpec OmegaSpec::power(double a, double alpha) {
  if (!(a > 0.0)) throw DomainError("omega power: a must be positive");
  if (!(alpha >= 0.0)) throw DomainError("omega power: alpha must be nonnegative");
  return OmegaSpec(Power{a, alpha});
}

OmegaSpec OmegaSpec::tabulated(Table table) {
  for (double v : table.values())
    if (!(v > 0.0)) throw DomainError("tabulated omega must be positive");
  return OmegaSpec(std::make_shared<const Table>(std::move(table)));
}

const Table* OmegaSpec::as_table() const {
  const auto* p = std::get_if<Tabulated>(&rep_);
  return p ? p->get() : nullptr;
}

double OmegaSpec::operator()(double t) const {
  if (!(t > 0.0)) throw DomainError("omega evaluated at t <= 0");
  return std::visit(overloaded{
                        [](const Constant& c) { return c.sigma; },
                        [t](const Power& p) { return p.a * std::pow(t, p.alpha); },
                        [t](const Tabulated& tab) { return (*tab)(t); },
                    },
                    rep_);
}

bool OmegaSpec::satisfies_growth_condition() const {
  if (is_constant()) return true;
  if (const auto* p = as_power()) return p->alpha < 1.0;
  // Tabulated: only the covered range can be judged; require omega(t)/t^a
  // bounded below for a = 0.99 on the table and monotonicity.
  const Table& tab = *as_table();
  double inf = kInf;
  for (std::size_t i = 0; i < tab.abscissae().size(); ++i)
    inf = std::min(inf, tab.values()[i] / std::pow(tab.abscissae()[i], 0.99));
  return inf > 0.0 && omega_is_monotone(*this, std::min(1.0, tab.back()));
}

std::string OmegaSpec::describe() const {
  return std::visit(overloaded{
                        [](const Constant& c) { return "constant:sigma=" + fmt(c.sigma); },
                        [](const Power& p) {
                          return "power:a=" + fmt(p.a) + ",alpha=" + fmt(p.alpha);
                        },
                        [](const Tabulated& t) {
                          return "tabulated:rows=" + std::to_string(t->abscissae().size());
                        },
                    },
                    rep_);
}

bool omega_is_monotone(const OmegaSpec& omega, double t_max, int samples) {
  double lo = 1e-6 * t_max;
  if (const Table* tab = omega.as_table()) lo = tab->front();
  double prev = omega(lo);
  if (!(prev > 0.0)) return false;
  for (int i = 1; i <= samples; ++i) {
    const double t = lo * std::pow(t_max / lo, static_cast<double>(i) / samples);
    const double v = omega(t);
    if (!(v > 0.0) || prev > v + 1e-12) return false;
    prev = v;
  }
  return true;
}

OmegaSpec parse_omega(const std::string& text) {
  const auto colon = text.find(':');
  const std::string family = text.substr(0, colon);
  const std::string body = colon == std::string::npos ? "" : text.substr(colon + 1);
  // Accept both ',' and ';' as separators so omega can nest inside a kernel.
  std::string norm = body;
  std::replace(norm.begin(), norm.end(), ';', ',');
  const auto p = parse_params(norm, ',');
  if (family == "constant") return OmegaSpec::constant(param(p, "sigma", 1.0));
  if (family == "power") return OmegaSpec::power(param(p, "a", 1.0), param(p, "alpha"));
  if (family == "tabulated") {
    const auto it = p.find("file");
    if (it == p.end()) throw ConfigError("tabulated omega needs file=");
    return OmegaSpec::tabulated(read_table_csv(it->second));
  }
  throw ConfigError("unknown omega family '" + family + "'");
}

// ---------------------------------------------------------------- AbsorptionKernel

AbsorptionKernel AbsorptionKernel::exp_omega(OmegaSpec omega) {
  return AbsorptionKernel(ExpOmega{std::move(omega)});
}
AbsorptionKernel AbsorptionKernel::double_exp(OmegaSpec omega) {
  return AbsorptionKernel(DoubleExp{std::move(omega)});
}
AbsorptionKernel AbsorptionKernel::lemma1(double sigma) {
  if (!(sigma > 0.0)) throw DomainError("lemma1 kernel: sigma must be positive");
  return AbsorptionKernel(Lemma1{sigma});
}
AbsorptionKernel AbsorptionKernel::porous_threshold(double m, double q, OmegaSpec omega) {
  if (!(m > 1.0) || !(q > m)) throw DomainError("porous-threshold kernel needs q > m > 1");
  return AbsorptionKernel(PorousThreshold{m, q, std::move(omega)});
}
AbsorptionKernel AbsorptionKernel::constant(double value) {
  if (!(value >= 0.0)) throw DomainError("constant kernel must be nonnegative");
  return AbsorptionKernel(Constant{value});
}
AbsorptionKernel AbsorptionKernel::power_time(double c, double alpha) {
  if (!(c >= 0.0)) throw DomainError("power-time kernel: c must be nonnegative");
  if (!(alpha > -1.0)) throw DomainError("power-time kernel: alpha must exceed -1");
  return AbsorptionKernel(PowerTime{c, alpha});
}
AbsorptionKernel AbsorptionKernel::tabulated(Table table) {
  for (double v : table.values())
    if (!(v >= 0.0)) throw DomainError("tabulated kernel must be nonnegative");
  return AbsorptionKernel(std::make_shared<const Table>(std::move(table)));
}

std::string AbsorptionKernel::family_name() const {
  return std::visit(overloaded{
                        [](const ExpOmega&) { return std::string("exp-omega"); },
                        [](const DoubleExp&) { return std::string("double-exp"); },
                        [](const Lemma1&) { return std::string("lemma1"); },
                        [](const PorousThreshold&) { return std::string("porous-threshold"); },
                        [](const Constant&) { return std::string("constant"); },
                        [](const PowerTime&) { return std::string("power-time"); },
                        [](const Tabulated&) { return std::string("tabulated"); },
                    },
                    rep_);
}

std::string AbsorptionKernel::describe() const {
  auto nested = [](const OmegaSpec& w) {
    std::string d = w.describe();
    std::replace(d.begin(), d.end(), ',', ';');
    return d;
  };
  return std::visit(
      overloaded{
          [&](const ExpOmega& k) { return "exp-omega:omega=" + nested(k.omega); },
          [&](const DoubleExp& k) { return "double-exp:omega=" + nested(k.omega); },
          [](const Lemma1& k) { return "lemma1:sigma=" + fmt(k.sigma); },
          [&](const PorousThreshold& k) {
            return "porous-threshold:m=" + fmt(k.m) + ",q=" + fmt(k.q) + ",omega=" + nested(k.omega);
          },
          [](const Constant& k) { return "constant:value=" + fmt(k.value); },
          [](const PowerTime& k) { return "power-time:c=" + fmt(k.c) + ",alpha=" + fmt(k.alpha); },
          [](const Tabulated& k) {
            return "tabulated:rows=" + std::to_string(k->abscissae().size());
          },
      },
      rep_);
}

double AbsorptionKernel::log_h(double t) const {
  if (!(t > 0.0)) throw DomainError("h evaluated at t <= 0");
  return std::visit(
      overloaded{
          [t](const ExpOmega& k) { return -k.omega(t) / t; },
          [t](const DoubleExp& k) { return -std::exp(k.omega(t) / t); },
          [t](const Lemma1& k) {
            const double s = k.sigma / t;
            return std::log(k.sigma) - 2.0 * std::log(t) + s - std::exp(s);
          },
          [t](const PorousThreshold& k) {
            return (k.q - k.m) / (k.m - 1.0) * std::log(t) - std::log(k.omega(t));
          },
          [](const Constant& k) { return k.value > 0.0 ? std::log(k.value) : kNegInf; },
          [t](const PowerTime& k) {
            return k.c > 0.0 ? std::log(k.c) + k.alpha * std::log(t) : kNegInf;
          },
          [t](const Tabulated& k) {
            const double v = t <= k->front() ? k->values().front() * t / k->front() : (*k)(t);
            return v > 0.0 ? std::log(v) : kNegInf;
          },
      },
      rep_);
}

double AbsorptionKernel::h(double t) const {
  const double l = log_h(t);
  return l == kNegInf ? 0.0 : std::exp(l);
}

double AbsorptionKernel::log_H(double r) const {
  if (!(r > 0.0)) throw DomainError("H evaluated at r <= 0");
  return log_increment(0.0, r);
}

double AbsorptionKernel::H(double r) const {
  const double l = log_H(r);
  if (l == kNegInf) return 0.0;
  return std::exp(l);
}

double AbsorptionKernel::log_increment(double a, double b) const {
  if (!(a >= 0.0) || !(b > a)) throw DomainError("H increment needs 0 <= a < b");
  auto numeric = [&]() {
    auto lf = [this](double s) { return log_h(s); };
    if (a == 0.0) return quad::log_integral_from_zero(lf, b).log_value;
    return quad::log_integral(lf, a, b).log_value;
  };
  return std::visit(
      overloaded{
          [&](const Lemma1& k) {
            // H(t) = exp(-exp(sigma/t)).
            const double eb = std::exp(k.sigma / b);
            if (a == 0.0) return -eb;
            const double ea = std::exp(k.sigma / a);
            if (eb == kInf) return kNegInf;
            return -eb + std::log(-std::expm1(-(ea - eb)));
          },
          [&](const Constant& k) {
            return k.value > 0.0 ? std::log(k.value) + std::log(b - a) : kNegInf;
          },
          [&](const PowerTime& k) {
            if (k.c == 0.0) return kNegInf;
            return std::log(k.c) + log_power_integral(a, b, k.alpha);
          },
          [&](const PorousThreshold& k) {
            const double p = (k.q - k.m) / (k.m - 1.0);
            if (const auto* c = k.omega.as_constant())
              return log_power_integral(a, b, p) - std::log(c->sigma);
            if (const auto* w = k.omega.as_power())
              return log_power_integral(a, b, p - w->alpha) - std::log(w->a);
            return numeric();
          },
          [&](const Tabulated& k) { return log_trapezoid_table(*k, a, b); },
          [&](const auto&) { return numeric(); },
      },
      rep_);
}

bool AbsorptionKernel::has_closed_form_primitive() const {
  return std::visit(overloaded{
                        [](const Lemma1&) { return true; },
                        [](const Constant&) { return true; },
                        [](const PowerTime&) { return true; },
                        [](const PorousThreshold& k) { return !k.omega.is_tabulated(); },
                        [](const Tabulated&) { return true; },
                        [](const auto&) { return false; },
                    },
                    rep_);
}

std::optional<OmegaSpec> AbsorptionKernel::omega() const {
  return std::visit(overloaded{
                        [](const ExpOmega& k) { return std::optional<OmegaSpec>(k.omega); },
                        [](const DoubleExp& k) { return std::optional<OmegaSpec>(k.omega); },
                        [](const PorousThreshold& k) { return std::optional<OmegaSpec>(k.omega); },
                        [](const auto&) { return std::optional<OmegaSpec>(); },
                    },
                    rep_);
}

double eval_h(const AbsorptionKernel& kernel, double t) { return kernel.h(t); }

double H_integral(const AbsorptionKernel& kernel, double r) { return kernel.H(r); }

AbsorptionKernel parse_kernel(const std::string& text) {
  const auto colon = text.find(':');
  const std::string family = text.substr(0, colon);
  const std::string body = colon == std::string::npos ? "" : text.substr(colon + 1);
  const auto p = parse_params(body, ',');
  auto omega_of = [&]() {
    const auto it = p.find("omega");
    if (it == p.end()) throw ConfigError(family + " kernel needs omega=");
    return parse_omega(it->second);
  };
  if (family == "exp-omega") return AbsorptionKernel::exp_omega(omega_of());
  if (family == "double-exp") return AbsorptionKernel::double_exp(omega_of());
  if (family == "lemma1") return AbsorptionKernel::lemma1(param(p, "sigma", 1.0));
  if (family == "porous-threshold")
    return AbsorptionKernel::porous_threshold(param(p, "m"), param(p, "q"), omega_of());
  if (family == "constant") return AbsorptionKernel::constant(param(p, "value", 1.0));
  if (family == "zero") return AbsorptionKernel::constant(0.0);
  if (family == "power-time")
    return AbsorptionKernel::power_time(param(p, "c", 1.0), param(p, "alpha"));
  if (family == "tabulated") {
    const auto it = p.find("file");
    if (it == p.end()) throw ConfigError("tabulated kernel needs file=");
    return AbsorptionKernel::tabulated(read_table_csv(it->second));
  }
  throw ConfigError("unknown kernel family '" + family + "'");
}

// ---------------------------------------------------------------- ProblemSpec

std::string describe(const Nonlinearity& n) {
  return std::visit(overloaded{
                        [](const PowerAbsorption& p) { return "power:q=" + fmt(p.q); },
                        [](const ExponentialAbsorption&) { return std::string("exponential"); },
                        [](const PorousAbsorption& p) {
                          return "porous:m=" + fmt(p.m) + ",q=" + fmt(p.q);
                        },
                        [](const AuxiliaryAbsorption& a) { return "auxiliary:ell=" + fmt(a.ell); },
                    },
                    n);
}

void ProblemSpec::validate() const {
  if (N < 1) throw DomainError("dimension N must be >= 1");
  if (!(R > 0.0)) throw DomainError("outer radius R must be positive");
  if (!(T > 0.0)) throw DomainError("time horizon T must be positive");
  std::visit(overloaded{
                 [](const PowerAbsorption& p) {
                   if (!(p.q > 1.0)) throw DomainError("power nonlinearity needs q > 1");
                 },
                 [](const ExponentialAbsorption&) {},
                 [](const PorousAbsorption& p) {
                   if (!(p.m > 1.0) || !(p.q > p.m))
                     throw DomainError("porous nonlinearity needs q > m > 1");
                 },
                 [](const AuxiliaryAbsorption& a) {
                   if (!(a.ell > 1.0)) throw DomainError("auxiliary equation needs ell > 1");
                 },
             },
             nonlinearity);
}

bool ProblemSpec::is_exponential() const {
  return std::holds_alternative<ExponentialAbsorption>(nonlinearity);
}

bool ProblemSpec::is_porous() const {
  return std::holds_alternative<PorousAbsorption>(nonlinearity);
}

std::optional<double> ProblemSpec::absorption_exponent() const {
  return std::visit(overloaded{
                        [](const PowerAbsorption& p) { return std::optional<double>(p.q); },
                        [](const ExponentialAbsorption&) { return std::optional<double>(); },
                        [](const PorousAbsorption& p) { return std::optional<double>(p.q); },
                        [](const AuxiliaryAbsorption& a) { return std::optional<double>(a.ell); },
                    },
                    nonlinearity);
}

bool FlatBound::exceeded_by(double u, double rel_tol, double abs_tol) const {
  if (infinite) return false;
  return u > value * (1.0 + rel_tol) + abs_tol;
}

FlatBound eval_U(const ProblemSpec& spec, double t) {
  if (!(t > 0.0)) throw DomainError("U evaluated at t <= 0");
  double q = 0.0;
  if (const auto* p = std::get_if<PowerAbsorption>(&spec.nonlinearity)) q = p->q;
  else if (const auto* p = std::get_if<PorousAbsorption>(&spec.nonlinearity)) q = p->q;
  else throw WrongVariant("U applies to power and porous equations; use Utilde");
  const double lh = spec.kernel.log_H(t);
  if (lh == kNegInf) return FlatBound::inf();
  if (lh == kInf) return FlatBound::finite(0.0);
  const double lu = -(std::log(q - 1.0) + lh) / (q - 1.0);
  if (lu >= kLogMax) return FlatBound::inf();
  return FlatBound::finite(std::exp(lu));
}

FlatBound eval_Utilde(const ProblemSpec& spec, double t) {
  if (!(t > 0.0)) throw DomainError("Utilde evaluated at t <= 0");
  if (!spec.is_exponential()) throw WrongVariant("Utilde applies to the exponential equation only");
  const double lh = spec.kernel.log_H(t);
  if (lh == kNegInf) return FlatBound::inf();
  return FlatBound::finite(-lh);
}

FlatBound flat_supersolution(const ProblemSpec& spec, double t) {
  if (std::holds_alternative<AuxiliaryAbsorption>(spec.nonlinearity)) return FlatBound::inf();
  if (spec.is_exponential()) return eval_Utilde(spec, t);
  return eval_U(spec, t);
}

}  // namespace blowup
