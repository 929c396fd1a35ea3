#include <doctest.h>

#include <cmath>

#include "blowup/errors.hpp"
#include "blowup/kernels.hpp"
#include "blowup/quadrature.hpp"

using namespace blowup;

// Reference values below come from 30-digit evaluations of the closed forms
// (exponential integral and incomplete gamma for the exp-omega primitives).

TEST_CASE("lemma1 kernel: h, H, U and Utilde at sigma = 1") {
  const auto k = AbsorptionKernel::lemma1(1.0);
  CHECK(k.h(0.5) == doctest::Approx(4.0 * std::exp(2.0 - std::exp(2.0))).epsilon(1e-13));
  CHECK(k.h(0.5) == doctest::Approx(0.0182651256805116626).epsilon(1e-13));
  CHECK(k.H(1.0) == doctest::Approx(std::exp(-std::exp(1.0))).epsilon(1e-13));
  ProblemSpec power{1, PowerAbsorption{2.0}, k, 1.0, 1.0};
  CHECK(eval_U(power, 0.5).value == doctest::Approx(std::exp(std::exp(2.0))).epsilon(1e-12));
  ProblemSpec expo{1, ExponentialAbsorption{}, k, 1.0, 1.0};
  CHECK(eval_Utilde(expo, 0.5).value == doctest::Approx(std::exp(2.0)).epsilon(1e-14));
}

TEST_CASE("lemma1 kernel underflows to an exact zero") {
  const auto k = AbsorptionKernel::lemma1(1.0);
  CHECK(k.h(1e-3) == 0.0);
  CHECK(k.H(1e-3) == 0.0);
}

TEST_CASE("lemma1 primitive: quadrature agrees with the closed form") {
  const double sigma = 1.0;
  auto log_h = [&](double t) {
    const double s = sigma / t;
    return std::log(sigma) - 2.0 * std::log(t) + s - std::exp(s);
  };
  for (double r : {0.05, 0.1, 0.3, 0.6, 1.0}) {
    const auto q = quad::log_integral_from_zero(log_h, r, 1e-12);
    CHECK(std::exp(q.log_value) == doctest::Approx(std::exp(-std::exp(sigma / r))).epsilon(1e-7));
  }
}

TEST_CASE("exp-omega primitives against special-function references") {
  const auto c = AbsorptionKernel::exp_omega(OmegaSpec::constant(1.0));
  CHECK(c.H(1.0) == doctest::Approx(0.148495506775922048).epsilon(1e-9));
  CHECK(c.H(0.05) == doctest::Approx(4.70242821542907449e-12).epsilon(1e-9));
  const auto s = AbsorptionKernel::exp_omega(OmegaSpec::power(1.0, 0.5));
  CHECK(s.H(1.0) == doctest::Approx(0.219383934395520274).epsilon(1e-9));
  CHECK(s.H(0.05) == doctest::Approx(1.60281416209124373e-4).epsilon(1e-9));
  ProblemSpec spec{1, PowerAbsorption{2.0}, s, 3.0, 0.06};
  CHECK(eval_U(spec, 0.05).value == doctest::Approx(6239.02648012086128).epsilon(1e-9));
}

TEST_CASE("constant and power-time kernels have closed-form primitives") {
  CHECK(AbsorptionKernel::constant(2.0).H(0.3) == doctest::Approx(0.6));
  CHECK(AbsorptionKernel::power_time(3.0, 2.0).H(0.5) == doctest::Approx(0.125));
  CHECK(AbsorptionKernel::constant(0.0).H(0.5) == 0.0);
}

TEST_CASE("flat bounds: infinite signal and wrong-variant errors") {
  ProblemSpec zero{1, PowerAbsorption{2.0}, AbsorptionKernel::constant(0.0), 1.0, 1.0};
  CHECK(eval_U(zero, 0.5).infinite);
  ProblemSpec one{1, PowerAbsorption{3.0}, AbsorptionKernel::constant(1.0), 1.0, 1.0};
  // U = ((q-1) t)^(-1/(q-1)) for h = 1.
  CHECK(eval_U(one, 0.5).value == doctest::Approx(1.0));
  CHECK_THROWS_AS(eval_Utilde(one, 0.5), WrongVariant);
  ProblemSpec expo{1, ExponentialAbsorption{}, AbsorptionKernel::constant(1.0), 1.0, 1.0};
  CHECK(eval_Utilde(expo, 0.25).value == doctest::Approx(-std::log(0.25)));
  CHECK_THROWS_AS(eval_U(expo, 0.5), WrongVariant);
}

TEST_CASE("h evaluation rejects t <= 0") {
  const auto k = AbsorptionKernel::constant(1.0);
  CHECK_THROWS_AS(eval_h(k, 0.0), DomainError);
  CHECK_THROWS_AS(eval_h(k, -1.0), DomainError);
}

TEST_CASE("H is nondecreasing and matches increments") {
  for (const char* text : {"exp-omega:omega=constant:sigma=1", "exp-omega:omega=power:a=1;alpha=0.5",
                           "double-exp:omega=constant:sigma=0.5", "lemma1:sigma=2", "power-time:c=1,alpha=1"}) {
    CAPTURE(text);
    const auto k = parse_kernel(text);
    double prev = 0.0;
    for (double r = 0.05; r <= 1.0; r += 0.05) {
      const double H = k.H(r);
      CHECK(H >= prev);
      prev = H;
    }
    const double inc = std::exp(k.log_increment(0.3, 0.7));
    CHECK(inc == doctest::Approx(k.H(0.7) - k.H(0.3)).epsilon(1e-7));
  }
}

TEST_CASE("kernel descriptors round-trip through the parser") {
  for (const char* text : {"exp-omega:omega=power:a=1;alpha=0.5", "lemma1:sigma=1", "constant:value=1",
                           "power-time:c=1,alpha=0.5", "porous-threshold:m=2,q=3,omega=constant:sigma=1"}) {
    CAPTURE(text);
    const auto k = parse_kernel(text);
    const auto again = parse_kernel(k.describe());
    CHECK(again.describe() == k.describe());
    CHECK(again.h(0.3) == k.h(0.3));
  }
  CHECK_THROWS_AS(parse_kernel("nonsense:x=1"), ConfigError);
  CHECK_THROWS_AS(parse_omega("power:a=1"), ConfigError);
}

TEST_CASE("porous threshold kernel is t^((q-m)/(m-1)) / omega") {
  const auto k = parse_kernel("porous-threshold:m=2,q=3,omega=power:a=2;alpha=1");
  CHECK(k.h(0.4) == doctest::Approx(0.4 / (2.0 * 0.4)));
}
