#include "oracles/oracles.hpp"

#include <cmath>
#include <numbers>

#include "oamq/quadrature.hpp"

namespace oracle {

using std::numbers::pi;
using cd = std::complex<double>;

double area(int m, double s, double w0, oamq::AreaConvention conv) {
  const double d = conv == oamq::AreaConvention::Quarter ? 4.0 : 2.0;
  return pi * w0 * w0 * (1.0 + s * s) * (std::abs(m) + 1) / d;
}

std::complex<double> chi_closed_form(int l, int m, double s, double w0, oamq::AreaConvention conv) {
  const double d = conv == oamq::AreaConvention::Quarter ? 4.0 : 2.0;
  const int n = l - m;
  const int an = std::abs(n), am = std::abs(m), al = std::abs(l);
  // normalized mode at the waist: sqrt(2(|k|+1)/(d |k|!)) (2x)^{|k|/2} e^{-x}, x = rho^2/w0^2
  auto c = [d](int k) { return std::sqrt(2.0 * (k + 1) / (d * std::tgamma(k + 1.0))); };
  const double p = 0.5 * (an + am + al);
  const cd beta = 2.0 + 1.0 / cd(1.0, s);
  const cd prefactor = c(an) * c(am) * c(al) * std::pow(2.0, p) * std::pow(1.0 + s * s, -0.5 * am) *
                       std::polar(1.0, -(am + 1) * std::atan(s));
  // 2 pi int rho drho = pi w0^2 int dx
  return pi * w0 * w0 * prefactor * std::tgamma(p + 1.0) / std::pow(beta, p + 1.0);
}

std::complex<double> overlap_2d(int n, int m, int l, const oamq::BeamGeometry& geom,
                                oamq::AreaConvention conv, int n_rho, int n_phi) {
  const double rmax = 8.0 * std::max(geom.w0, oamq::beam_radius(geom, geom.zs));
  const auto& rule = oamq::gauss_legendre(n_rho);
  cd sum;
  for (int i = 0; i < n_rho; ++i) {
    const double rho = 0.5 * rmax * (rule.nodes[i] + 1.0);
    const double wr = 0.5 * rmax * rule.weights[i] * rho;
    for (int j = 0; j < n_phi; ++j) {
      const double phi = 2.0 * pi * j / n_phi;
      const cd v = oamq::normalized_mode(oamq::ModeIndex(n), rho, phi, 0.0, geom, conv) *
                   oamq::normalized_mode(oamq::ModeIndex(m), rho, phi, geom.zs, geom, conv) *
                   std::conj(oamq::normalized_mode(oamq::ModeIndex(l), rho, phi, 0.0, geom, conv));
      sum += wr * (2.0 * pi / n_phi) * v;
    }
  }
  return sum;
}

std::complex<double> gram_entry(int m, int m2, double z, const oamq::BeamGeometry& geom, int n_rho,
                                int n_phi) {
  const double rmax = 10.0 * oamq::beam_radius(geom, z);
  const auto& rule = oamq::gauss_legendre(n_rho);
  cd sum;
  for (int i = 0; i < n_rho; ++i) {
    const double rho = 0.5 * rmax * (rule.nodes[i] + 1.0);
    const double wr = 0.5 * rmax * rule.weights[i] * rho;
    for (int j = 0; j < n_phi; ++j) {
      const double phi = 2.0 * pi * j / n_phi;
      sum += wr * (2.0 * pi / n_phi) *
             std::conj(oamq::lg_amplitude(oamq::ModeIndex(m), rho, phi, z, geom)) *
             oamq::lg_amplitude(oamq::ModeIndex(m2), rho, phi, z, geom);
    }
  }
  return sum;
}

std::complex<double> waist_mode(int m, double rho, double phi, double w0) {
  const int am = std::abs(m);
  const double mag = std::sqrt(2.0 / (pi * w0 * w0 * std::tgamma(am + 1.0))) *
                     std::pow(std::sqrt(2.0) * rho / w0, am) * std::exp(-rho * rho / (w0 * w0));
  return std::polar(mag, m * phi);
}

double j0_series_quad(double x) {
  const __float128 q = -static_cast<__float128>(x) * static_cast<__float128>(x) / 4;
  __float128 term = 1;
  __float128 sum = 1;
  for (int k = 1; k < 400; ++k) {
    term *= q / (static_cast<__float128>(k) * k);
    sum += term;
    const __float128 a = term < 0 ? -term : term;
    if (a < static_cast<__float128>(1e-40)) break;
  }
  return static_cast<double>(sum);
}

}  // namespace oracle
