#pragma once

namespace oamq {

/// Bessel function of the first kind, order zero, for x >= 0 (negative x is
/// mirrored). Absolute error below 1e-12 for x <= 500.
double bessel_j0(double x);

}  // namespace oamq
