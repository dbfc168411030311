#pragma once

// Laguerre-Gaussian modes with zero radial index: mode functions, their
// paraxial propagation, mode areas, and the diffraction-free cell checks.

#include <compare>
#include <complex>
#include <string>
#include <string_view>

namespace oamq {

inline constexpr int kMaxModeIndex = 64;

/// Azimuthal (OAM) index of a p = 0 Laguerre-Gaussian mode. Used for the
/// signal index, the write/read drive indices, and the coherence index.
class ModeIndex {
 public:
  constexpr ModeIndex() = default;
  /// Throws IndexOverflowError when |m| > kMaxModeIndex.
  explicit ModeIndex(int m);

  constexpr int value() const noexcept { return m_; }
  constexpr int magnitude() const noexcept { return m_ < 0 ? -m_ : m_; }

  friend constexpr auto operator<=>(ModeIndex, ModeIndex) = default;
  friend ModeIndex operator-(ModeIndex a, ModeIndex b) { return ModeIndex(a.m_ - b.m_); }
  friend ModeIndex operator+(ModeIndex a, ModeIndex b) { return ModeIndex(a.m_ + b.m_); }

 private:
  int m_ = 0;
};

enum class AreaConvention { Quarter, Half };

/// 4 for Quarter, 2 for Half.
double area_divisor(AreaConvention conv) noexcept;
std::string to_string(AreaConvention conv);
/// Accepts "quarter" or "half"; throws ConfigError otherwise.
AreaConvention parse_area_convention(std::string_view text);

struct BeamGeometry {
  double w0 = 1.0;          // waist radius
  double wavelength = 1e-3;
  double zs = 0.0;          // drive waist offset from the signal waist

  double rayleigh_range() const noexcept;
  double zs_ratio() const noexcept { return zs / rayleigh_range(); }
  double wavenumber() const noexcept;
  /// pi * w0 / lambda
  double paraxial_ratio() const noexcept;

  /// Throws GeometryError unless w0 > 0, lambda > 0 and pi*w0/lambda >= 10.
  void validate() const;

  static BeamGeometry with_zs_ratio(double w0, double wavelength, double zs_ratio);
};

struct CellGeometry {
  double length = 0.0;
  double area = 0.0;
};

double beam_radius(const BeamGeometry& geom, double z);

/// pi w(z)^2 (|m|+1) / d with d = 4 (Quarter) or 2 (Half).
double mode_area(ModeIndex m, double z, const BeamGeometry& geom, AreaConvention conv);

/// Propagated LG amplitude. The z-independent carrier e^{ikz} is not
/// included; Gouy and wavefront-curvature phases are.
std::complex<double> lg_amplitude(ModeIndex m, double rho, double phi, double z,
                                  const BeamGeometry& geom);

/// lg_amplitude scaled by sqrt(mode_area): integrates |U|^2 to the mode area.
std::complex<double> normalized_mode(ModeIndex m, double rho, double phi, double z,
                                     const BeamGeometry& geom, AreaConvention conv);

/// Amplitude and phase factors that map the waist-plane mode onto the
/// propagated one: U(rho, z) = U(rho, 0) * amplitude * exp(i k z phase_factor).
struct FresnelFactors {
  double amplitude = 1.0;
  double phase_factor = 1.0;
  /// k z (phase_factor - 1): the propagation phase without the carrier,
  /// evaluated without forming k z first.
  double extra_phase = 0.0;
  /// True when z == 0 and the removable 1/z form was replaced by its limit.
  bool limit = false;
};

FresnelFactors fresnel_factors(double rho, double z, ModeIndex m, const BeamGeometry& geom);

struct ConstraintThresholds {
  double max_length_ratio = 0.1;    // L / z_R
  double area_tolerance = 0.05;     // |S - pi w0^2| / (pi w0^2)
  double min_paraxial_ratio = 10.0; // pi w0 / lambda
};

struct ConditionResult {
  std::string name;
  std::string requirement;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct ValidityReport {
  ConditionResult length;
  ConditionResult area;
  ConditionResult paraxial;

  bool pass() const noexcept { return length.pass && area.pass && paraxial.pass; }
  int passed_count() const noexcept {
    return int(length.pass) + int(area.pass) + int(paraxial.pass);
  }
};

ValidityReport check_paraxial_constraints(const BeamGeometry& geom, const CellGeometry& cell,
                                          const ConstraintThresholds& thresholds = {});

}  // namespace oamq
