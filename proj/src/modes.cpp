#include "oamq/modes.hpp"

#include <cmath>
#include <numbers>

#include "oamq/errors.hpp"

namespace oamq {

using std::numbers::pi;

ModeIndex::ModeIndex(int m) : m_(m) {
  if (m > kMaxModeIndex || m < -kMaxModeIndex) {
    throw IndexOverflowError("mode index " + std::to_string(m) + " exceeds |m| <= " +
                             std::to_string(kMaxModeIndex));
  }
}

double area_divisor(AreaConvention conv) noexcept {
  return conv == AreaConvention::Quarter ? 4.0 : 2.0;
}

std::string to_string(AreaConvention conv) {
  return conv == AreaConvention::Quarter ? "quarter" : "half";
}

AreaConvention parse_area_convention(std::string_view text) {
  if (text == "quarter") return AreaConvention::Quarter;
  if (text == "half") return AreaConvention::Half;
  throw ConfigError("conventions.area", "expected 'quarter' or 'half', got '" + std::string(text) + "'");
}

double BeamGeometry::rayleigh_range() const noexcept { return pi * w0 * w0 / wavelength; }

double BeamGeometry::wavenumber() const noexcept { return 2.0 * pi / wavelength; }

double BeamGeometry::paraxial_ratio() const noexcept { return pi * w0 / wavelength; }

void BeamGeometry::validate() const {
  if (!(w0 > 0.0) || !std::isfinite(w0)) throw GeometryError("waist w0 must be positive");
  if (!(wavelength > 0.0) || !std::isfinite(wavelength))
    throw GeometryError("wavelength must be positive");
  if (!std::isfinite(zs)) throw GeometryError("waist offset z_S must be finite");
  if (paraxial_ratio() < 10.0) {
    throw GeometryError("non-paraxial geometry: pi*w0/lambda = " + std::to_string(paraxial_ratio()) +
                        " < 10");
  }
}

BeamGeometry BeamGeometry::with_zs_ratio(double w0, double wavelength, double zs_ratio) {
  BeamGeometry g{w0, wavelength, 0.0};
  g.zs = zs_ratio * g.rayleigh_range();
  return g;
}

double beam_radius(const BeamGeometry& geom, double z) {
  const double s = z / geom.rayleigh_range();
  return geom.w0 * std::sqrt(1.0 + s * s);
}

double mode_area(ModeIndex m, double z, const BeamGeometry& geom, AreaConvention conv) {
  const double s = z / geom.rayleigh_range();
  return pi * geom.w0 * geom.w0 * (1.0 + s * s) * (m.magnitude() + 1) / area_divisor(conv);
}

namespace {

// log of sqrt(2 / (pi w^2 |m|!)) * (sqrt(2) rho / w)^|m|, rho > 0
double log_radial_magnitude(int am, double rho, double w) {
  double v = 0.5 * (std::log(2.0 / pi) - 2.0 * std::log(w) - std::lgamma(am + 1.0));
  if (am > 0) v += am * std::log(std::numbers::sqrt2 * rho / w);
  return v;
}

}  // namespace

std::complex<double> lg_amplitude(ModeIndex m, double rho, double phi, double z,
                                  const BeamGeometry& geom) {
  const int am = m.magnitude();
  if (am > 0 && rho == 0.0) return {0.0, 0.0};

  const double zr = geom.rayleigh_range();
  const double w = beam_radius(geom, z);
  const double magnitude = std::exp(log_radial_magnitude(am, rho, w) - rho * rho / (w * w));

  // k rho^2 / (2 R(z)) with R(z) = z (1 + zr^2 / z^2), written to stay finite at z = 0
  const double curvature = geom.wavenumber() * rho * rho * z / (2.0 * (z * z + zr * zr));
  const double gouy = (am + 1) * std::atan2(z, zr);
  const double phase = m.value() * phi + curvature - gouy;
  return std::polar(magnitude, phase);
}

std::complex<double> normalized_mode(ModeIndex m, double rho, double phi, double z,
                                     const BeamGeometry& geom, AreaConvention conv) {
  return lg_amplitude(m, rho, phi, z, geom) * std::sqrt(mode_area(m, z, geom, conv));
}

FresnelFactors fresnel_factors(double rho, double z, ModeIndex m, const BeamGeometry& geom) {
  const double w0 = geom.w0;
  const double lam = geom.wavelength;
  const double am = m.magnitude();
  const double pw4 = pi * pi * w0 * w0 * w0 * w0;  // pi^2 w0^4
  const double lz2 = lam * lam * z * z;

  FresnelFactors f;
  f.amplitude = std::pow(pw4 / (pw4 + lz2), 0.5 * (am + 1.0)) *
                std::exp(rho * rho * lz2 / (w0 * w0 * (lz2 + pw4)));

  const double curvature_term = rho * rho * lam * lam / (2.0 * (lz2 + pw4));
  if (z == 0.0) {
    f.limit = true;
    f.phase_factor = 1.0 + curvature_term - lam * lam * (am + 1.0) / (2.0 * pi * pi * w0 * w0);
    f.extra_phase = 0.0;
    return f;
  }
  const double atan_term = lam * (am + 1.0) / (2.0 * pi * z) * std::atan(z * lam / (pi * w0 * w0));
  f.phase_factor = 1.0 + curvature_term - atan_term;
  const double kz = geom.wavenumber() * z;
  f.extra_phase = kz * curvature_term - (am + 1.0) * std::atan(z * lam / (pi * w0 * w0));
  return f;
}

ValidityReport check_paraxial_constraints(const BeamGeometry& geom, const CellGeometry& cell,
                                          const ConstraintThresholds& thresholds) {
  ValidityReport report;

  const double zr = geom.rayleigh_range();
  report.length.name = "length";
  report.length.requirement = "L / z_R <= max (cell much shorter than the Rayleigh range)";
  report.length.value = cell.length / zr;
  report.length.threshold = thresholds.max_length_ratio;
  report.length.pass = cell.length > 0.0 && report.length.value <= thresholds.max_length_ratio;

  const double beam_area = pi * geom.w0 * geom.w0;
  report.area.name = "area";
  report.area.requirement = "|S - pi w0^2| / (pi w0^2) <= tol (cell matches the beam)";
  report.area.value = std::abs(cell.area - beam_area) / beam_area;
  report.area.threshold = thresholds.area_tolerance;
  report.area.pass = cell.area > 0.0 && report.area.value <= thresholds.area_tolerance;

  report.paraxial.name = "paraxial";
  report.paraxial.requirement = "pi w0 / lambda >= min (paraxial beam)";
  report.paraxial.value = geom.paraxial_ratio();
  report.paraxial.threshold = thresholds.min_paraxial_ratio;
  report.paraxial.pass = report.paraxial.value >= thresholds.min_paraxial_ratio;
  return report;
}

}  // namespace oamq
