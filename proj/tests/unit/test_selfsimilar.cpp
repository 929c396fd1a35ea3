#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "blowup/errors.hpp"
#include "blowup/selfsimilar.hpp"
#include "blowup/thresholds.hpp"

using namespace blowup;

namespace {

const ProfileResult& cached(int N, double ell) {
  static std::map<std::pair<int, double>, ProfileResult> cache;
  auto it = cache.find({N, ell});
  if (it == cache.end()) it = cache.emplace(std::make_pair(N, ell), find_profile(N, ell)).first;
  return it->second;
}

}  // namespace

TEST_CASE("shooting: small amplitude overshoots, a = 1 is the equilibrium") {
  CHECK(shoot(1, 2.0, 0.1).kind == ShotKind::Overshoot);
  CHECK(shoot(1, 2.0, 1.0).kind == ShotKind::Undershoot);
  CHECK(shoot(1, 2.0, 0.99).kind == ShotKind::Undershoot);
}

TEST_CASE("linear equation: the decaying solution is (eta^2 - 2N) e^{-eta^2/4} up to scale") {
  // With ell large the reaction term is negligible for small f; the shot from
  // a tiny amplitude overshoots near eta = sqrt(2N).
  for (int N : {1, 3}) {
    const auto s = shoot(N, 5.0, 1e-6);
    CHECK(s.kind == ShotKind::Overshoot);
    CHECK(std::abs(s.eta_end - std::sqrt(2.0 * N)) <= 2.0 * kProfileSpacing);
  }
}

TEST_CASE("profile suite") {
  for (int N : {1, 3}) {
    double prev_ell = 0.0;
    const ProfileResult* prev = nullptr;
    std::vector<double> ells{1.2, 1.5, ell_star(N), 2.0, 3.0};
    std::sort(ells.begin(), ells.end());
    for (double ell : ells) {
      if (std::abs(ell - prev_ell) < 1e-12) continue;
      CAPTURE(N);
      CAPTURE(ell);
      const auto& p = cached(N, ell);
      double fmax = 0.0;
      for (double f : p.f) fmax = std::max(fmax, f);
      CHECK(fmax <= 1.0 + 1e-8);
      CHECK(profile_residual(p) <= 1e-6);
      if (ell >= ell_star(N) - 1e-12) CHECK(p.delta_fit > 0.0);
      if (prev) {
        // pointwise monotone in ell on the sample grid
        for (double eta = 0.0; eta <= 12.0; eta += 0.05)
          CHECK(profile_value(p, eta) >= profile_value(*prev, eta) - 1e-8);
      }
      prev = &p;
      prev_ell = ell;
    }
  }
}

TEST_CASE("tail exponent at ell* is close to 2") {
  for (int N : {1, 3}) {
    const auto& p = cached(N, ell_star(N));
    CHECK(p.tail_p == doctest::Approx(2.0).epsilon(0.15));
  }
}

TEST_CASE("profiles decay like eta^2 e^{-eta^2/4}") {
  const auto& p = cached(1, 2.0);
  for (double eta : {10.0, 14.0, 18.0}) {
    const double ratio = profile_value(p, eta) / ((eta * eta + 1.0) * std::exp(-eta * eta / 4.0));
    CHECK(ratio >= p.delta_fit * (1.0 - 1e-9));
    CHECK(ratio < 10.0);
  }
  CHECK(profile_value(p, 25.0) == 0.0);
}

TEST_CASE("VSS amplitude and scaling identity") {
  CHECK(vss_amplitude(1, 2.0, 1.0) == doctest::Approx(1.5));
  CHECK(vss_amplitude(3, 3.0, 2.0) == doctest::Approx(std::sqrt(5.0 / 4.0)));
  const auto& p = cached(1, 2.0);
  // v(lambda x, lambda^2 t) = lambda^{-(N+2)} v(x, t)
  for (double lam : {0.5, 2.0}) {
    const double v = vss_field(1, 2.0, 1.0, p, 0.3, 0.02);
    const double w = vss_field(1, 2.0, 1.0, p, lam * 0.3, lam * lam * 0.02);
    CHECK(w == doctest::Approx(v * std::pow(lam, -3.0)).epsilon(1e-12));
  }
}

TEST_CASE("bad profile inputs") {
  CHECK_THROWS_AS(find_profile(1, 1.0), DomainError);
  CHECK_THROWS_AS(find_profile(0, 2.0), DomainError);
}
