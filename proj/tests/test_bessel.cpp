#include <doctest.h>

#include <cmath>

#include "trdet/bessel.hpp"

using namespace trdet;

TEST_CASE("k0 reference values") {
  // Frozen from the ascending-series definition.
  CHECK(bessel_k0(1.0) == doctest::Approx(0.4210244382).epsilon(1e-9));
  CHECK(bessel_k0(2.0) == doctest::Approx(0.1138938727).epsilon(1e-9));
}

TEST_CASE("k0 matches the standard-library implementation to 1e-10") {
  for (double x = 0.01; x <= 700.0; x *= 1.17) {
    const double ref = std::cyl_bessel_k(0.0, x);
    const double got = bessel_k0(x);
    if (ref > 0.0) {
      CHECK(std::abs(got - ref) / ref < 1e-10);
    }
  }
}

TEST_CASE("k0 small-argument logarithmic behavior") {
  // K0(x) + log(x/2) + gamma -> 0 as x -> 0.
  const double x = 1e-6;
  CHECK(std::abs(bessel_k0(x) + std::log(0.5 * x) + kEulerGamma) < 1e-6);
}

TEST_CASE("k0 domain and underflow") {
  CHECK_THROWS_AS(bessel_k0(0.0), std::domain_error);
  CHECK_THROWS_AS(bessel_k0(-1.0), std::domain_error);
  CHECK(bessel_k0(800.0) == 0.0);
  CHECK(bessel_k0_scaled(800.0) > 0.0);
}

TEST_CASE("scaled k0 consistency") {
  for (double x : {0.5, 1.0, 3.0, 10.0, 50.0}) {
    CHECK(bessel_k0_scaled(x) ==
          doctest::Approx(std::exp(x) * bessel_k0(x)).epsilon(1e-12));
  }
}
