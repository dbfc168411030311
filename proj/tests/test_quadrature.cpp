#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oamq/quadrature.hpp"

using namespace oamq;

TEST_CASE("Gauss-Legendre weights and symmetry") {
  for (int n : {1, 2, 5, 64, 257, 1024}) {
    const auto& r = gauss_legendre(n);
    CHECK(std::accumulate(r.weights.begin(), r.weights.end(), 0.0) == doctest::Approx(2.0).epsilon(1e-13));
    for (int i = 0; i < n; ++i) CHECK(r.nodes[i] == doctest::Approx(-r.nodes[n - 1 - i]).epsilon(1e-15));
    for (int i = 1; i < n; ++i) CHECK(r.nodes[i] > r.nodes[i - 1]);
  }
}

TEST_CASE("Gauss-Legendre is exact to degree 2n-1") {
  const int n = 8;
  for (int k = 0; k <= 2 * n - 1; ++k) {
    const double v = integrate_fixed<double>([k](double x) { return std::pow(x, k); }, 0.0, 1.0, n);
    CHECK(v == doctest::Approx(1.0 / (k + 1)).epsilon(1e-14));
  }
}

TEST_CASE("rules are cached") { CHECK(&gauss_legendre(64) == &gauss_legendre(64)); }

TEST_CASE("doubling integration converges") {
  const auto r = integrate([](double x) { return std::exp(-x * x); }, 0.0, 8.0);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(std::sqrt(M_PI) / 2).epsilon(1e-14));
  const auto c = integrate_complex([](double x) { return std::polar(1.0, 3.0 * x); }, 0.0, 1.0);
  CHECK(std::abs(c.value - (std::polar(1.0, 3.0) - 1.0) / std::complex<double>(0, 3)) < 1e-14);
}

TEST_CASE("non-convergence is reported, not hidden") {
  QuadratureSpec spec{4, 1e-15, 16};
  const auto r = integrate([](double x) { return std::sin(200.0 * x); }, 0.0, 3.0, spec);
  CHECK_FALSE(r.converged);
}

TEST_CASE("uniform-grid weights") {
  const auto t = trapezoid_weights(11, 0.1);
  CHECK(std::accumulate(t.begin(), t.end(), 0.0) == doctest::Approx(1.0));
  const auto s = simpson_weights(11, 0.1);
  CHECK(std::accumulate(s.begin(), s.end(), 0.0) == doctest::Approx(1.0));
  CHECK_THROWS(simpson_weights(10, 0.1));
}
