#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oamq/bessel.hpp"
#include "oracles/oracles.hpp"

using oamq::bessel_j0;

TEST_CASE("J0 reference values") {
  CHECK(bessel_j0(0.0) == 1.0);
  CHECK(std::abs(bessel_j0(2.404825557695773)) < 1e-10);
  CHECK(std::abs(bessel_j0(10.0) - -0.2459357644513483) < 1e-12);
  CHECK(std::abs(oracle::j0_series_quad(10.0) - -0.2459357644513483) < 1e-15);
}

TEST_CASE("J0 against a 128-bit series on [0, 40]") {
  double worst = 0.0;
  for (double x = 0.0; x <= 40.0; x += 0.0173) {
    worst = std::max(worst, std::abs(bessel_j0(x) - oracle::j0_series_quad(x)));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("J0 against the standard library up to 500") {
  double worst = 0.0;
  for (double x = 0.0; x <= 500.0; x += 0.0731) {
    worst = std::max(worst, std::abs(bessel_j0(x) - std::cyl_bessel_j(0.0, x)));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("J0 is even and bounded") {
  for (double x : {0.3, 7.0, 17.0, 17.0000001, 123.4}) {
    CHECK(bessel_j0(-x) == bessel_j0(x));
    CHECK(std::abs(bessel_j0(x)) <= 1.0);
  }
}
