#pragma once

// Absorption coefficients h(t), their primitives H(t) = int_0^t h, and the
// flat supersolutions built from them.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace blowup {

// Piecewise-linear samples (t_i, v_i) with strictly increasing t_i > 0.
class Table {
 public:
  Table(std::vector<double> t, std::vector<double> v);

  double operator()(double t) const;  // linear interpolation, throws outside
  double front() const { return t_.front(); }
  double back() const { return t_.back(); }
  std::span<const double> abscissae() const { return t_; }
  std::span<const double> values() const { return v_; }

 private:
  std::vector<double> t_;
  std::vector<double> v_;
};

// Two-column CSV (t, value) with a header row.
Table read_table_csv(const std::string& path);

// The modulus omega(t) in h(t) = exp(-omega(t)/t) and friends.
class OmegaSpec {
 public:
  struct Constant { double sigma; };
  struct Power { double a; double alpha; };
  using Tabulated = std::shared_ptr<const Table>;

  static OmegaSpec constant(double sigma);
  static OmegaSpec power(double a, double alpha);
  static OmegaSpec tabulated(Table table);

  double operator()(double t) const;

  // inf{omega(t)/t^alpha : 0 < t <= 1} > 0 for some alpha in [0,1), plus
  // monotonicity; what the single-point regime assumes of omega.
  bool satisfies_growth_condition() const;

  bool is_constant() const { return std::holds_alternative<Constant>(rep_); }
  bool is_power() const { return std::holds_alternative<Power>(rep_); }
  bool is_tabulated() const { return std::holds_alternative<Tabulated>(rep_); }
  const Constant* as_constant() const { return std::get_if<Constant>(&rep_); }
  const Power* as_power() const { return std::get_if<Power>(&rep_); }
  const Table* as_table() const;

  std::string describe() const;

 private:
  explicit OmegaSpec(std::variant<Constant, Power, Tabulated> rep) : rep_(std::move(rep)) {}
  std::variant<Constant, Power, Tabulated> rep_;
};

// Sampled check that omega is positive and nondecreasing on (0, t_max].
bool omega_is_monotone(const OmegaSpec& omega, double t_max, int samples = 400);

// Parses "constant:sigma=1", "power:a=1,alpha=0.5", "tabulated:file=w.csv".
OmegaSpec parse_omega(const std::string& text);

class AbsorptionKernel {
 public:
  struct ExpOmega { OmegaSpec omega; };                 // exp(-omega/t)
  struct DoubleExp { OmegaSpec omega; };                // exp(-exp(omega/t))
  struct Lemma1 { double sigma; };                      // s t^-2 e^(s/t) e^(-e^(s/t))
  struct PorousThreshold { double m, q; OmegaSpec omega; };  // t^((q-m)/(m-1)) / omega
  struct Constant { double value; };
  struct PowerTime { double c, alpha; };                // c t^alpha
  using Tabulated = std::shared_ptr<const Table>;
  using Rep = std::variant<ExpOmega, DoubleExp, Lemma1, PorousThreshold, Constant,
                           PowerTime, Tabulated>;

  static AbsorptionKernel exp_omega(OmegaSpec omega);
  static AbsorptionKernel double_exp(OmegaSpec omega);
  static AbsorptionKernel lemma1(double sigma);
  static AbsorptionKernel porous_threshold(double m, double q, OmegaSpec omega);
  static AbsorptionKernel constant(double value);
  static AbsorptionKernel power_time(double c, double alpha);
  static AbsorptionKernel tabulated(Table table);

  const Rep& rep() const { return rep_; }
  std::string family_name() const;
  std::string describe() const;

  // ln h(t); -inf where h underflows or vanishes.
  double log_h(double t) const;
  double h(double t) const;

  // ln int_0^r h(s) ds; +inf when the integral diverges at 0.
  double log_H(double r) const;
  double H(double r) const;

  // ln int_a^b h(s) ds for 0 <= a < b.
  double log_increment(double a, double b) const;

  bool has_closed_form_primitive() const;
  // The omega descriptor when the family carries one.
  std::optional<OmegaSpec> omega() const;

 private:
  explicit AbsorptionKernel(Rep rep) : rep_(std::move(rep)) {}
  Rep rep_;
};

// eval_h: errors with DomainError for t <= 0.
double eval_h(const AbsorptionKernel& kernel, double t);
// H_integral
double H_integral(const AbsorptionKernel& kernel, double r);

// Parses "exp-omega:omega=power:a=1;alpha=0.5", "lemma1:sigma=1",
// "constant:value=1", "power-time:c=1,alpha=0.5",
// "porous-threshold:m=2,q=3,omega=constant:sigma=1", "tabulated:file=h.csv".
// Nested omega parameters use ';' instead of ','.
AbsorptionKernel parse_kernel(const std::string& text);

struct PowerAbsorption { double q; };
struct ExponentialAbsorption {};
struct PorousAbsorption { double m; double q; };
// h(t) (v^ell + 1): the auxiliary comparison equation; h is the problem kernel.
struct AuxiliaryAbsorption { double ell; };

using Nonlinearity =
    std::variant<PowerAbsorption, ExponentialAbsorption, PorousAbsorption, AuxiliaryAbsorption>;

std::string describe(const Nonlinearity& n);

struct ProblemSpec {
  int N = 1;
  Nonlinearity nonlinearity = PowerAbsorption{2.0};
  AbsorptionKernel kernel = AbsorptionKernel::constant(1.0);
  double R = 1.0;  // outer radius of the truncated domain
  double T = 1.0;  // time horizon

  void validate() const;
  bool is_exponential() const;
  bool is_porous() const;
  // Absorption exponent q (power/porous) or ell (auxiliary).
  std::optional<double> absorption_exponent() const;
};

// A flat supersolution value, or the explicit +inf signal.
struct FlatBound {
  double value = 0.0;
  bool infinite = false;

  static FlatBound inf() { return {0.0, true}; }
  static FlatBound finite(double v) { return {v, false}; }
  bool exceeded_by(double u, double rel_tol, double abs_tol) const;
};

// U(t) = ((q-1) H(t))^(-1/(q-1)) for power and porous equations.
FlatBound eval_U(const ProblemSpec& spec, double t);
// Utilde(t) = -ln H(t) for the exponential equation.
FlatBound eval_Utilde(const ProblemSpec& spec, double t);
// Whichever bound applies to the spec's nonlinearity; inf for the auxiliary.
FlatBound flat_supersolution(const ProblemSpec& spec, double t);

}  // namespace blowup
