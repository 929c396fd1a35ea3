#include "blowup/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "blowup/errors.hpp"

namespace blowup::quad {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kPanelCutoff = 1e-16;
constexpr int kMaxPanels = 1060;
}  // namespace

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

LogIntegral log_integral(const std::function<double(double)>& log_f, double a, double b,
                         double rel_tol) {
  if (!(a < b)) throw DomainError("log_integral: empty interval");
  // Scale by the largest sampled log-value so the integrand peaks near 1.
  double ref = kNegInf;
  constexpr int kProbe = 8;
  for (int i = 0; i <= kProbe; ++i) {
    const double s = a + (b - a) * i / kProbe;
    if (s > 0.0) ref = std::max(ref, log_f(s));
  }
  if (ref == kNegInf) return {kNegInf, 0.0, 1};
  if (!std::isfinite(ref)) throw NumericalFailure("log_integral: integrand not finite");

  // Integrate on [-1, 1]: boost compares the unscaled Kronrod-Gauss gap with
  // a tolerance scaled by the interval length, so short intervals would
  // otherwise recurse to full depth.
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  auto scaled = [&](double x) {
    const double v = log_f(mid + half * x) - ref;
    return v == kNegInf ? 0.0 : std::exp(v);
  };
  double err = 0.0;
  const double value = half * boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
                                  scaled, -1.0, 1.0, 15, rel_tol, &err);
  err *= half;
  if (value <= 0.0) return {kNegInf, 0.0, 1};
  return {ref + std::log(value), err / value, 1};
}

LogIntegral log_integral_from_zero(const std::function<double(double)>& log_f, double r,
                                   double rel_tol) {
  if (!(r > 0.0)) throw DomainError("log_integral_from_zero: r must be positive");
  double total = kNegInf;
  double abs_err_log = kNegInf;  // ln of accumulated absolute error
  int panels = 0;
  int quiet = 0;
  double hi = r;
  for (int j = 0; j < kMaxPanels; ++j) {
    const double lo = 0.5 * hi;
    if (lo < std::numeric_limits<double>::min()) break;
    const LogIntegral piece = log_integral(log_f, lo, hi, rel_tol);
    ++panels;
    if (piece.log_value != kNegInf) {
      abs_err_log = log_add(abs_err_log, piece.log_value + std::log(std::max(piece.rel_error, 1e-300)));
    }
    const bool negligible =
        total != kNegInf && piece.log_value < total + std::log(kPanelCutoff);
    total = log_add(total, piece.log_value);
    if (piece.log_value == kNegInf && total != kNegInf) {
      ++quiet;
    } else {
      quiet = negligible ? quiet + 1 : 0;
    }
    if (quiet >= 3) {
      const double rel = total == kNegInf ? 0.0 : std::exp(abs_err_log - total);
      return {total, rel, panels};
    }
    if (total == kNegInf && piece.log_value == kNegInf && j > 60) {
      // Integrand underflows on every panel examined: exact zero at double range.
      return {kNegInf, 0.0, panels};
    }
    hi = lo;
  }
  const double estimate = total == kNegInf ? 0.0 : std::exp(total);
  throw NumericalFailure("log_integral_from_zero: panels did not decay (integral diverges at 0?)",
                         estimate, estimate);
}

}  // namespace blowup::quad
