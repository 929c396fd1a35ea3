#include <doctest.h>

#include <cmath>
#include <random>

#include "blowup/errors.hpp"
#include "blowup/grid.hpp"
#include "blowup/parallel/pointwise.hpp"
#include "blowup/quadrature.hpp"
#include "blowup/tridiagonal.hpp"

using namespace blowup;

TEST_CASE("log_add") {
  CHECK(quad::log_add(0.0, 0.0) == doctest::Approx(std::log(2.0)));
  CHECK(quad::log_add(1000.0, 0.0) == doctest::Approx(1000.0));
  CHECK(quad::log_add(-INFINITY, 3.0) == 3.0);
}

TEST_CASE("log_integral: polynomial and short intervals") {
  const auto r = quad::log_integral([](double s) { return 2.0 * std::log(s); }, 1.0, 2.0);
  CHECK(std::exp(r.log_value) == doctest::Approx(7.0 / 3.0).epsilon(1e-12));
  // short intervals used to force full recursion; must stay cheap and exact
  const auto tiny = quad::log_integral([](double) { return 0.0; }, 0.5, 0.5 + 1e-9);
  CHECK(std::exp(tiny.log_value) == doctest::Approx(1e-9).epsilon(1e-10));
  CHECK(tiny.panels <= 4);
}

TEST_CASE("log_integral_from_zero resolves e^{-1/t}") {
  const auto r = quad::log_integral_from_zero([](double t) { return -1.0 / t; }, 1.0, 1e-12);
  CHECK(std::exp(r.log_value) == doctest::Approx(0.148495506775922048).epsilon(1e-10));
}

TEST_CASE("sphere area and ball volume") {
  CHECK(sphere_area(1) == doctest::Approx(2.0));
  CHECK(sphere_area(2) == doctest::Approx(2.0 * M_PI));
  CHECK(sphere_area(3) == doctest::Approx(4.0 * M_PI));
  CHECK(ball_volume(3, 2.0) == doctest::Approx(4.0 / 3.0 * M_PI * 8.0));
}

TEST_CASE("grid volumes partition the ball; refinement keeps nodes") {
  for (int N : {1, 2, 3}) {
    const RadialGrid g(N, 3.0, 120, 1.02);
    double sum = 0.0;
    for (double v : g.volumes()) sum += v;
    CHECK(sum == doctest::Approx(ball_volume(N, 3.0)).epsilon(1e-12));
    const RadialGrid f = g.refined();
    CHECK(f.cells() == 2 * g.cells());
    for (std::size_t j = 0; j < g.size(); ++j) CHECK(f.nodes()[2 * j] == doctest::Approx(g.nodes()[j]).epsilon(1e-14));
    std::vector<double> one(g.size(), 1.0);
    CHECK(g.mass(one) == doctest::Approx(ball_volume(N, 3.0)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(RadialGrid(1, 1.0, 0), DomainError);
}

TEST_CASE("tridiagonal solve recovers a known solution") {
  const std::size_t n = 50;
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> a(n), b(n), c(n), x(n), d(n), scratch;
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = u(rng);
    c[i] = u(rng);
    b[i] = 3.0 + std::abs(a[i]) + std::abs(c[i]);
    x[i] = u(rng);
  }
  for (std::size_t i = 0; i < n; ++i)
    d[i] = b[i] * x[i] + (i > 0 ? a[i] * x[i - 1] : 0.0) + (i + 1 < n ? c[i] * x[i + 1] : 0.0);
  solve_tridiagonal(a, b, c, d, scratch);
  for (std::size_t i = 0; i < n; ++i) CHECK(d[i] == doctest::Approx(x[i]).epsilon(1e-12));
}

TEST_CASE("absorption flows solve their ODEs exactly") {
  // u' = -u^2 with h = 1 over dt: u0 / (1 + u0 dt)
  CHECK(pointwise::power_flow(2.0, std::log(0.5), 2.0) == doctest::Approx(1.0).epsilon(1e-15));
  // u' = -e^u: e^-u grows by dt
  CHECK(pointwise::exponential_flow(0.0, std::log(0.25)) == doctest::Approx(-std::log(1.25)).epsilon(1e-15));
  // huge data saturates at the flat bound ((q-1) dH)^(-1/(q-1))
  CHECK(pointwise::power_flow(1e300, std::log(1e-3), 3.0) == doctest::Approx(std::pow(2e-3, -0.5)).epsilon(1e-12));
  CHECK(pointwise::power_flow(1.5, -INFINITY, 2.0) == 1.5);
  double v = 2.0;
  pointwise::auxiliary_implicit(v, 0.1, 2.0);
  CHECK(v + 0.1 * (v * v + 1.0) == doctest::Approx(2.0).epsilon(1e-14));
  double w = 0.05;
  pointwise::auxiliary_implicit(w, 0.1, 2.0);
  CHECK(w == 0.0);
}

TEST_CASE("serial and OpenMP kernels are bit-identical") {
  const std::size_t n = 3 * pointwise::kParallelThreshold + 17;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.0, 50.0);
  std::vector<double> base(n);
  for (auto& x : base) x = u(rng);

  auto a = base, b = base;
  pointwise::serial::absorb_power(a, std::log(0.01), 2.5);
  pointwise::parallel::absorb_power(b, std::log(0.01), 2.5);
  CHECK(a == b);

  a = base, b = base;
  pointwise::serial::absorb_exponential(a, std::log(0.3));
  pointwise::parallel::absorb_exponential(b, std::log(0.3));
  CHECK(a == b);

  a = base, b = base;
  const long ia = pointwise::serial::absorb_auxiliary(a, 0.2, 2.0);
  const long ib = pointwise::parallel::absorb_auxiliary(b, 0.2, 2.0);
  CHECK(a == b);
  CHECK(ia == ib);

  std::vector<double> p1(n), d1(n), p2(n), d2(n);
  pointwise::serial::porous_mobility(base, p1, d1, 2.0, 1e-10);
  pointwise::parallel::porous_mobility(base, p2, d2, 2.0, 1e-10);
  CHECK(p1 == p2);
  CHECK(d1 == d2);
}
