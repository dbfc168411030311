#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace oamq {

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

/// Nodes and weights of order n, computed once per order by Newton iteration
/// on the Legendre recurrence and cached. Thread-safe.
const GaussLegendreRule& gauss_legendre(int n);

struct QuadratureSpec {
  int initial_order = 64;
  double rel_tol = 1e-10;
  int max_order = 8192;
};

template <typename T>
struct QuadratureResult {
  T value{};
  int order = 0;
  bool converged = false;
  T previous{};
};

/// Fixed-order Gauss-Legendre on [a, b].
template <typename T>
T integrate_fixed(const std::function<T(double)>& f, double a, double b, int order) {
  const auto& rule = gauss_legendre(order);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  T sum{};
  for (int i = 0; i < order; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return sum * half;
}

/// Doubles the order until two successive estimates agree to rel_tol.
/// Does not throw; the caller decides what to do with converged == false.
QuadratureResult<double> integrate(const std::function<double(double)>& f, double a, double b,
                                   const QuadratureSpec& spec = {});
QuadratureResult<std::complex<double>> integrate_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    const QuadratureSpec& spec = {});

/// Trapezoid weights on a uniform grid with n points and step h.
std::vector<double> trapezoid_weights(int n, double h);
/// Composite Simpson weights; n must be odd.
std::vector<double> simpson_weights(int n, double h);

}  // namespace oamq
