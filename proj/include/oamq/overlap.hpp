#pragma once

// Triple-mode overlap integrals between signal, drive, and coherence modes,
// their normalized forms, conversion coefficients, and scans over z_S / z_R.

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oamq/modes.hpp"
#include "oamq/quadrature.hpp"

namespace oamq {

struct OverlapRecord {
  ModeIndex l;  // signal
  ModeIndex m;  // drive
  ModeIndex n;  // coherence, always l - m
  double zs_ratio = 0.0;
  std::complex<double> chi;        // units of area
  std::complex<double> chi_tilde;  // chi / sqrt(S_l S_{l-m})
  std::complex<double> chi_over_s; // chi / S_{l-m}
  AreaConvention convention = AreaConvention::Half;
  int quad_order = 0;
};

/// Which normalization of chi drives the coupled dynamics and kernels.
enum class ChiNormalization { Appendix, MainText };

std::string to_string(ChiNormalization norm);
/// Accepts "appendix" or "maintext".
ChiNormalization parse_chi_normalization(std::string_view text);

/// chi_tilde for Appendix, chi_over_s for MainText.
std::complex<double> normalized_chi(const OverlapRecord& rec, ChiNormalization norm);

/// Radial overlap 2 pi int rho U_{l-m}(rho, 0) U_m(rho, z_S) U*_l(rho, 0) drho
/// of normalized modes, with the azimuthal integral done analytically.
/// Throws AccuracyError if the quadrature does not converge.
OverlapRecord chi(ModeIndex l, ModeIndex m, const BeamGeometry& geom, AreaConvention conv,
                  const QuadratureSpec& quad = {});

/// Overlap with an explicit coherence index. Exactly zero unless n == l - m.
std::complex<double> chi_three_index(ModeIndex n, ModeIndex m, ModeIndex l,
                                     const BeamGeometry& geom, AreaConvention conv,
                                     const QuadratureSpec& quad = {});

/// A drive is either an LG mode or a plane wave (std::nullopt). A plane-wave
/// drive leaves the signal index unchanged and has a unit overlap factor.
using Drive = std::optional<ModeIndex>;

inline int drive_shift(const Drive& d) { return d ? d->value() : 0; }
std::string drive_label(const Drive& d);

enum class CoefficientForm {
  /// (chi_{l+I-J, I} / S_{l-J}) (chi_{l,J} / S_{l-J}): read overlap taken
  /// at the retrieved signal index.
  Coupled,
  /// (chi_{l-J, I} / S_{l-J-I}) (chi_{l,J} / S_{l-J}): read overlap taken at
  /// the stored index. Differs from Coupled only when I != 0.
  Stored,
};

struct ConversionCoefficient {
  ModeIndex l;
  Drive I;
  Drive J;
  std::complex<double> value;
  int output_oam = 0;  // l + I - J
};

/// Main-text normalized single-stage factor chi_{l,m} / S_{l-m}, or 1 for a
/// plane-wave drive.
std::complex<double> stage_factor(ModeIndex l, const Drive& drive, const BeamGeometry& geom,
                                  AreaConvention conv, const QuadratureSpec& quad = {});

ConversionCoefficient conversion_coefficient(ModeIndex l, const Drive& I, const Drive& J,
                                             const BeamGeometry& geom, AreaConvention conv,
                                             const QuadratureSpec& quad = {},
                                             CoefficientForm form = CoefficientForm::Coupled);

/// One record per (l, z_S) in l-major order. Geometry supplies w0 and lambda;
/// its zs is ignored. zs_grid must be strictly increasing.
std::vector<OverlapRecord> scan_chi(const std::vector<ModeIndex>& l_set, ModeIndex m,
                                    const std::vector<double>& zs_grid, const BeamGeometry& geom,
                                    AreaConvention conv, const QuadratureSpec& quad = {});

/// Index of the largest |normalized chi| within each curve of a scan, where a
/// curve is a run of consecutive records with the same (l, m).
std::vector<std::size_t> curve_argmax(const std::vector<OverlapRecord>& scan,
                                      ChiNormalization norm);

}  // namespace oamq
