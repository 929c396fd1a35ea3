#include "blowup/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "blowup/errors.hpp"
#include "blowup/quadrature.hpp"

namespace blowup {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kTrendWindow = 4;
constexpr double kDecayRatio = 0.9;

// Classification of partial sums by the trend of their last increments.
void classify_by_increments(DiniResult& out) {
  const auto& p = out.partials;
  if (p.size() < kTrendWindow + 1) {
    out.cls = DiniClass::Undecided;
    return;
  }
  std::vector<double> inc;
  for (std::size_t j = p.size() - kTrendWindow; j < p.size(); ++j) inc.push_back(p[j] - p[j - 1]);
  bool growing = true;
  bool decaying = true;
  double worst_ratio = 0.0;
  for (std::size_t i = 1; i < inc.size(); ++i) {
    if (inc[i] < inc[i - 1] * (1.0 - 1e-9)) growing = false;
    const double ratio = inc[i - 1] > 0.0 ? inc[i] / inc[i - 1] : 0.0;
    worst_ratio = std::max(worst_ratio, ratio);
    if (!(ratio <= kDecayRatio)) decaying = false;
  }
  if (growing) {
    out.cls = DiniClass::Divergent;
  } else if (decaying) {
    out.cls = DiniClass::Finite;
    out.value = p.back() + inc.back() * worst_ratio / (1.0 - worst_ratio);
  } else {
    out.cls = DiniClass::Undecided;
  }
}

}  // namespace

std::string to_string(DiniClass c) {
  switch (c) {
    case DiniClass::Finite: return "finite";
    case DiniClass::Divergent: return "divergent";
    case DiniClass::Undecided: return "undecided";
  }
  return "undecided";
}

std::vector<double> geometric_cutoffs(int count, double ratio) {
  if (count < 1 || !(ratio > 0.0 && ratio < 1.0)) throw DomainError("bad cutoff schedule");
  std::vector<double> eps;
  double e = 1.0;
  for (int j = 0; j < count; ++j) eps.push_back(e *= ratio);
  return eps;
}

DiniResult classify_improper_integral(const std::function<double(double)>& g,
                                      const std::vector<double>& cutoffs) {
  if (cutoffs.empty()) throw DomainError("empty cutoff schedule");
  for (std::size_t j = 0; j < cutoffs.size(); ++j) {
    if (!(cutoffs[j] > 0.0 && cutoffs[j] < 1.0)) throw DomainError("cutoffs must lie in (0,1)");
    if (j > 0 && !(cutoffs[j] < cutoffs[j - 1])) throw DomainError("cutoffs must decrease");
  }
  DiniResult out;
  out.cutoffs = cutoffs;
  // Integrate in s = ln t: int g(t) dt = int g(e^s) e^s ds.
  auto in_log = [&](double s) {
    const double t = std::exp(s);
    return g(t) * t;
  };
  double partial = 0.0;
  double upper = 0.0;  // ln 1
  for (double eps : cutoffs) {
    const double lower = std::log(eps);
    partial += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(in_log, lower, upper,
                                                                             12, 1e-12);
    out.partials.push_back(partial);
    upper = lower;
  }
  classify_by_increments(out);
  return out;
}

DiniResult dini_classify(const OmegaSpec& omega, double exponent,
                         const std::vector<double>& cutoffs) {
  if (!(exponent > 0.0 && exponent <= 1.0)) throw DomainError("Dini exponent must lie in (0,1]");
  if (const auto* c = omega.as_constant()) {
    (void)c;
    DiniResult out;
    out.cls = DiniClass::Divergent;
    out.analytic = true;
    return out;
  }
  if (const auto* p = omega.as_power()) {
    DiniResult out;
    out.analytic = true;
    const double e = p->alpha * exponent;
    if (e > 0.0) {
      out.cls = DiniClass::Finite;
      out.value = std::pow(p->a, exponent) / e;
    } else {
      out.cls = DiniClass::Divergent;
    }
    return out;
  }
  const Table& tab = *omega.as_table();
  if (tab.front() > cutoffs.back() || tab.back() < 1.0)
    throw InsufficientData("tabulated omega does not cover [" + std::to_string(cutoffs.back()) +
                           ", 1]");
  return classify_improper_integral(
      [&](double t) { return std::pow(omega(t), exponent) / t; }, cutoffs);
}

DiniResult porous_admissibility_probe(const AbsorptionKernel& kernel, double m, double q, int N,
                                      const std::vector<double>& cutoffs) {
  if (!(m > 1.0) || !(q > 1.0) || N < 1) throw DomainError("porous probe needs m, q > 1, N >= 1");
  const double w = -(q - 1.0) / (m - 1.0 + 2.0 / N);
  return classify_improper_integral(
      [&](double t) { return kernel.h(t) * std::pow(t, w); }, cutoffs);
}

double theta_exponent(double m, double q, int N) {
  if (!(m > 1.0) || !(q > m)) throw DomainError("theta needs q > m > 1");
  if (N < 1) throw DomainError("theta needs N >= 1");
  const double theta = (m * m - 1.0) / ((N * (m - 1.0) + 2.0 * (m + 1.0)) * (q - 1.0));
  if (!(theta > 0.0 && theta < 1.0)) throw NumericalFailure("theta left (0,1)", theta);
  return theta;
}

double alpha_ell(int N, double ell) {
  if (!(ell > 1.0)) throw DomainError("alpha_ell needs ell > 1");
  if (N < 1) throw DomainError("alpha_ell needs N >= 1");
  return (ell - 1.0) * (N + 2.0) / 2.0 - 1.0;
}

double ell_star(int N) {
  if (N < 1) throw DomainError("ell* needs N >= 1");
  return (N + 4.0) / (N + 2.0);
}

double lemma1_log_constant(double sigma, double tau, double ell, int N) {
  if (!(sigma > 0.0) || !(tau > 0.0) || !(ell > 1.0) || N < 1)
    throw DomainError("lemma1_constant needs sigma, tau > 0, ell > 1, N >= 1");
  return std::log(sigma) + (1.0 - ell) * sigma / tau - 0.5 * (ell * (N + 2.0) - N) * std::log(tau);
}

double lemma1_constant(double sigma, double tau, double ell, int N) {
  return std::exp(lemma1_log_constant(sigma, tau, ell, N));
}

double lemma1_beta_closed_form(double ell, int N) {
  return (ell - 1.0) / (alpha_ell(N, ell) + 2.0);
}

SubsolutionScan verify_subsolution_inequality(double sigma, double tau, double ell, int N,
                                              const ScanGrid& grid) {
  if (grid.time_nodes < 1 || grid.rho_nodes < 1 || (grid.time_nodes > 1 && !(grid.decades > 0.0)))
    throw DomainError("empty subsolution scan grid");
  SubsolutionScan out;
  out.c = lemma1_constant(sigma, tau, ell, N);  // may underflow; the scan does not use it directly
  const double alpha = alpha_ell(N, ell);
  const double log_slack = std::log1p(-1e-12);
  out.worst_log_margin = kInf;

  // ln lhs - ln rhs, rearranged so the parts that cancel at (tau, Utilde)
  // are never formed separately: with s = sigma/t and rho = phi e^s,
  //   (alpha+2) ln(t/tau) + (ell-1) sigma (tau-t)/(t tau)
  //     + ell ln phi + log1p(rho^-ell) + e^s (1 - phi).
  for (int i = 0; i < grid.time_nodes; ++i) {
    const double frac = grid.time_nodes == 1 ? 0.0 : 1.0 - static_cast<double>(i) / (grid.time_nodes - 1);
    const double t = i == grid.time_nodes - 1 ? tau : tau * std::pow(10.0, -grid.decades * frac);
    const double s = sigma / t;
    const double big_e = std::exp(s);  // Utilde(t), may be +inf
    const double base = (alpha + 2.0) * std::log(t / tau) + (ell - 1.0) * sigma * (tau - t) / (t * tau);
    const int first = grid.boundary_row_only ? grid.rho_nodes - 1 : 0;
    for (int j = first; j < grid.rho_nodes; ++j) {
      const double phi = grid.rho_nodes == 1 ? 1.0 : static_cast<double>(j) / (grid.rho_nodes - 1);
      double margin;
      if (phi > 0.0) {
        const double log_rho = std::log(phi) + s;
        margin = base + ell * std::log(phi) + std::log1p(std::exp(-ell * log_rho));
      } else {
        margin = base - (ell - 1.0) * s - s;  // rho = 0: ln(rho^ell + 1) = 0
      }
      if (phi < 1.0) margin += big_e * (1.0 - phi);
      ++out.points;
      out.worst_log_margin = std::min(out.worst_log_margin, margin);
      if (margin < log_slack && out.holds) {
        out.holds = false;
        out.witness_t = t;
        out.witness_rho = phi * big_e;
      }
    }
  }
  return out;
}

BetaSearch find_beta(double sigma, double ell, int N, std::optional<double> tau_lo,
                     std::optional<double> tau_hi, const ScanGrid& grid, double rel_tol) {
  double lo = tau_lo.value_or(1e-4 * sigma);
  double hi = tau_hi.value_or(10.0 * sigma);
  if (!(lo > 0.0) || hi < lo) throw DomainError("find_beta: bad bracket");
  BetaSearch out;
  auto holds = [&](double tau) {
    ++out.scans;
    return verify_subsolution_inequality(sigma, tau, ell, N, grid).holds;
  };
  if (!holds(lo)) throw NotFound("find_beta: scan fails already at the lower end of the bracket");
  if (hi == lo || holds(hi)) {
    out.tau_star = hi;
    out.beta = hi / sigma;
    return out;
  }
  while (hi - lo > rel_tol * lo) {
    const double mid = 0.5 * (lo + hi);
    if (holds(mid)) lo = mid;
    else hi = mid;
  }
  out.tau_star = lo;
  out.beta = lo / sigma;
  return out;
}

}  // namespace blowup
