#include "oamq/bessel.hpp"

#include <cmath>
#include <numbers>

namespace oamq {

namespace {

constexpr double kSeriesLimit = 17.0;

double j0_series(double x) {
  const long double q = -0.25L * x * x;
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<long double>(k) * k);
    sum += term;
    if (std::fabs(term) < 1e-22L * std::fabs(sum) && std::fabs(term) < 1e-22L) break;
  }
  return static_cast<double>(sum);
}

// Hankel expansion: J0 = sqrt(2/(pi x)) (P cos(x - pi/4) - Q sin(x - pi/4)),
// summed until the terms stop shrinking.
double j0_asymptotic(double x) {
  const double inv8x = 1.0 / (8.0 * x);
  double p = 1.0;
  double q = 0.0;
  double a = 1.0;  // a_k = prod_{j<=k} (2j-1)^2 / (k! (8x)^k)
  double last = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double next = a * (2.0 * k - 1.0) * (2.0 * k - 1.0) * inv8x / k;
    if (std::abs(next) >= last) break;
    a = next;
    last = std::abs(a);
    switch (k % 4) {
      case 1: q -= a; break;
      case 2: p -= a; break;
      case 3: q += a; break;
      case 0: p += a; break;
    }
    if (last < 1e-17) break;
  }
  // cos(x - pi/4) = (cos x + sin x)/sqrt2, sin(x - pi/4) = (sin x - cos x)/sqrt2
  const double c = std::cos(x);
  const double s = std::sin(x);
  const double cm = (c + s) / std::numbers::sqrt2;
  const double sm = (s - c) / std::numbers::sqrt2;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * cm - q * sm);
}

}  // namespace

double bessel_j0(double x) {
  x = std::abs(x);
  if (x <= kSeriesLimit) return j0_series(x);
  return j0_asymptotic(x);
}

}  // namespace oamq
