#include <doctest.h>

#include <cmath>
#include <random>

#include "blowup/errors.hpp"
#include "blowup/thresholds.hpp"

using namespace blowup;

TEST_CASE("Dini family table") {
  const auto c = dini_classify(OmegaSpec::constant(2.0), 0.5);
  CHECK(c.cls == DiniClass::Divergent);
  CHECK(c.analytic);
  const auto s = dini_classify(OmegaSpec::power(1.0, 0.5), 0.5);
  CHECK(s.cls == DiniClass::Finite);
  CHECK(*s.value == doctest::Approx(4.0).epsilon(1e-12));
  const auto p = dini_classify(OmegaSpec::power(1.0, 1.0), 3.0 / 14.0);
  CHECK(p.cls == DiniClass::Finite);
  CHECK(*p.value == doctest::Approx(14.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("Dini power family: value a^e / (alpha e)") {
  for (double alpha : {0.1, 0.5, 1.0, 2.0})
    for (double e : {0.2, 0.5, 1.0}) {
      const auto d = dini_classify(OmegaSpec::power(1.0, alpha), e);
      CHECK(*d.value == doctest::Approx(1.0 / (alpha * e)).epsilon(1e-10));
    }
  const auto d = dini_classify(OmegaSpec::power(1.0, 0.0), 0.5);
  CHECK(d.cls == DiniClass::Divergent);
}

TEST_CASE("tabulated omega: geometric decay is finite, flat increments diverge") {
  std::vector<double> t, sq, flat;
  for (int j = 40; j >= 0; --j) {
    const double x = std::pow(2.0, -j);
    t.push_back(x);
    sq.push_back(std::sqrt(x));
    flat.push_back(1.0);
  }
  const auto fin = dini_classify(OmegaSpec::tabulated(Table(t, sq)), 0.5, geometric_cutoffs(30));
  CHECK(fin.cls == DiniClass::Finite);
  CHECK_FALSE(fin.analytic);
  CHECK(*fin.value == doctest::Approx(4.0).epsilon(2e-2));
  const auto div = dini_classify(OmegaSpec::tabulated(Table(t, flat)), 0.5, geometric_cutoffs(30));
  CHECK(div.cls == DiniClass::Divergent);
}

TEST_CASE("theta exponent") {
  CHECK(theta_exponent(2.0, 3.0, 1) == doctest::Approx(3.0 / 14.0).epsilon(1e-15));
  CHECK(theta_exponent(3.0, 4.0, 2) == doctest::Approx(2.0 / 9.0).epsilon(1e-15));
  double prev = 1.0;
  for (int N = 1; N <= 20; ++N) {
    const double th = theta_exponent(2.0, 3.0, N);
    CHECK(th < prev);
    prev = th;
  }
  CHECK_THROWS_AS(theta_exponent(2.0, 2.0, 1), DomainError);
  CHECK_THROWS_AS(theta_exponent(1.0, 3.0, 1), DomainError);
}

TEST_CASE("theta and alpha agree with rational recomputation at random inputs") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> small(1, 9);
  for (int i = 0; i < 20; ++i) {
    // m = 1 + a/b, q = m + c/d with integers, N in 1..5
    const int a = small(rng), b = small(rng), c = small(rng), d = small(rng), N = 1 + small(rng) % 5;
    const double m = 1.0 + double(a) / b;
    const double q = m + double(c) / d;
    // theta = (m^2-1) / ((N(m-1) + 2(m+1))(q-1)) with m-1 = a/b, m+1 = 2+a/b, q-1 = a/b + c/d
    const double num = (double(a) / b) * (2.0 + double(a) / b);
    const double den = (N * double(a) / b + 2.0 * (2.0 + double(a) / b)) * (double(a) / b + double(c) / d);
    CHECK(theta_exponent(m, q, N) == doctest::Approx(num / den).epsilon(1e-14));
    const double ell = 1.0 + double(c) / d;
    CHECK(alpha_ell(N, ell) == doctest::Approx(double(c) * (N + 2) / (2.0 * d) - 1.0).epsilon(1e-14));
  }
}

TEST_CASE("alpha_ell and ell*") {
  for (int N = 1; N <= 6; ++N) CHECK(std::abs(alpha_ell(N, ell_star(N))) <= 1e-12);
  CHECK(alpha_ell(1, 3.0) == doctest::Approx(2.0));
  CHECK(alpha_ell(2, 1.0 + 1e-12) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(alpha_ell(1, 1.0), DomainError);
}

TEST_CASE("lemma1 constant") {
  CHECK(lemma1_constant(1.0, 1.0, 2.0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(lemma1_constant(1.0, 0.5, 2.0, 1) == doctest::Approx(0.765571972083287392).epsilon(1e-14));
  // ell (N+2) - N = 7 for N = 3, ell = 2: c(tau) = e^{-1/tau} tau^{-7/2}
  CHECK(lemma1_constant(1.0, 0.5, 2.0, 3) == doctest::Approx(std::exp(-2.0) * std::pow(0.5, -3.5)).epsilon(1e-14));
  CHECK_THROWS_AS(lemma1_constant(1.0, 0.0, 2.0, 1), DomainError);
}

TEST_CASE("subsolution scan: small tau holds, large tau fails with a witness") {
  CHECK(verify_subsolution_inequality(1.0, 0.05, 2.0, 1).holds);
  const auto bad = verify_subsolution_inequality(1.0, 10.0, 2.0, 1);
  CHECK_FALSE(bad.holds);
  REQUIRE(bad.witness_t);
  CHECK(*bad.witness_t <= 10.0);
  CHECK_THROWS_AS(verify_subsolution_inequality(1.0, 0.1, 2.0, 1, ScanGrid{0, 1, 10, false}), DomainError);
}

TEST_CASE("subsolution scan: boundary row gives the full-scan verdict") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int i = 0; i < 10; ++i) {
    const double sigma = 0.25 + 2.0 * u01(rng);
    const double ell = 1.2 + 2.0 * u01(rng);
    const int N = 1 + i % 3;
    const double tau = sigma * (0.05 + 1.5 * u01(rng));
    ScanGrid full{400, 4.0, 48, false};
    ScanGrid row{400, 4.0, 48, true};
    CAPTURE(sigma);
    CAPTURE(ell);
    CAPTURE(tau);
    CHECK(verify_subsolution_inequality(sigma, tau, ell, N, full).holds ==
          verify_subsolution_inequality(sigma, tau, ell, N, row).holds);
  }
}

TEST_CASE("find_beta: scan holds below tau*, fails above, degenerate bracket") {
  const auto b = find_beta(1.0, 2.0, 1);
  CHECK(b.beta > 0.0);
  CHECK(verify_subsolution_inequality(1.0, 0.99 * b.tau_star, 2.0, 1).holds);
  CHECK_FALSE(verify_subsolution_inequality(1.0, 1.05 * b.tau_star, 2.0, 1).holds);
  // never below the closed-form sufficient threshold
  CHECK(b.beta >= lemma1_beta_closed_form(2.0, 1) * (1.0 - 1e-6));
  const auto d = find_beta(1.0, 2.0, 1, 0.05, 0.05);
  CHECK(d.beta == doctest::Approx(0.05));
  CHECK_THROWS_AS(find_beta(1.0, 2.0, 1, 5.0, 10.0), NotFound);
}

TEST_CASE("porous admissibility probe: pure power converges, t^-4/3 diverges") {
  const auto ok = porous_admissibility_probe(AbsorptionKernel::power_time(1.0, 1.0), 2.0, 3.0, 1);
  CHECK(ok.cls == DiniClass::Finite);
  const auto bad = porous_admissibility_probe(
      AbsorptionKernel::porous_threshold(2.0, 3.0, OmegaSpec::power(1.0, 7.0 / 3.0)), 2.0, 3.0, 1);
  CHECK(bad.cls == DiniClass::Divergent);
}
