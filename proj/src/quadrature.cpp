#include "oamq/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace oamq {

namespace {

GaussLegendreRule build_rule(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess for the i-th largest root
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[n - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[n - 1 - i] = w;
    rule.weights[i] = w;
  }
  return rule;
}

template <typename T>
QuadratureResult<T> integrate_doubling(const std::function<T(double)>& f, double a, double b,
                                       const QuadratureSpec& spec) {
  if (spec.initial_order < 1 || spec.max_order < spec.initial_order) {
    throw std::invalid_argument("invalid quadrature orders");
  }
  QuadratureResult<T> res;
  int order = spec.initial_order;
  T prev = integrate_fixed<T>(f, a, b, order);
  while (order * 2 <= spec.max_order) {
    order *= 2;
    const T cur = integrate_fixed<T>(f, a, b, order);
    const double scale = std::max(std::abs(cur), std::abs(prev));
    res.value = cur;
    res.previous = prev;
    res.order = order;
    if (std::abs(cur - prev) <= spec.rel_tol * scale || scale == 0.0) {
      res.converged = true;
      return res;
    }
    prev = cur;
  }
  if (res.order == 0) {
    res.value = prev;
    res.previous = prev;
    res.order = order;
  }
  return res;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre order must be positive");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussLegendreRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussLegendreRule>(build_rule(n));
  return *slot;
}

QuadratureResult<double> integrate(const std::function<double(double)>& f, double a, double b,
                                   const QuadratureSpec& spec) {
  return integrate_doubling<double>(f, a, b, spec);
}

QuadratureResult<std::complex<double>> integrate_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    const QuadratureSpec& spec) {
  return integrate_doubling<std::complex<double>>(f, a, b, spec);
}

std::vector<double> trapezoid_weights(int n, double h) {
  if (n < 2) throw std::invalid_argument("trapezoid rule needs at least two points");
  std::vector<double> w(n, h);
  w.front() = w.back() = 0.5 * h;
  return w;
}

std::vector<double> simpson_weights(int n, double h) {
  if (n < 3 || n % 2 == 0) throw std::invalid_argument("Simpson rule needs an odd point count >= 3");
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = (i == 0 || i == n - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
  for (auto& v : w) v *= h / 3.0;
  return w;
}

}  // namespace oamq
