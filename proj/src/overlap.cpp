#include "oamq/overlap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oamq/errors.hpp"
#include "oamq/parallel.hpp"

namespace oamq {

std::string to_string(ChiNormalization norm) {
  return norm == ChiNormalization::Appendix ? "appendix" : "maintext";
}

ChiNormalization parse_chi_normalization(std::string_view text) {
  if (text == "appendix") return ChiNormalization::Appendix;
  if (text == "maintext") return ChiNormalization::MainText;
  throw ConfigError("conventions.chi_norm",
                    "expected 'appendix' or 'maintext', got '" + std::string(text) + "'");
}

std::complex<double> normalized_chi(const OverlapRecord& rec, ChiNormalization norm) {
  return norm == ChiNormalization::Appendix ? rec.chi_tilde : rec.chi_over_s;
}

std::string drive_label(const Drive& d) { return d ? std::to_string(d->value()) : "plane"; }

OverlapRecord chi(ModeIndex l, ModeIndex m, const BeamGeometry& geom, AreaConvention conv,
                  const QuadratureSpec& quad) {
  geom.validate();
  const ModeIndex n = l - m;
  const double zs = geom.zs;
  const double rho_max = 8.0 * std::max(geom.w0, beam_radius(geom, zs));

  auto integrand = [&](double rho) {
    const auto un = normalized_mode(n, rho, 0.0, 0.0, geom, conv);
    const auto um = normalized_mode(m, rho, 0.0, zs, geom, conv);
    const auto ul = normalized_mode(l, rho, 0.0, 0.0, geom, conv);
    return rho * un * um * std::conj(ul);
  };
  const auto res = integrate_complex(integrand, 0.0, rho_max, quad);
  if (!res.converged) {
    throw AccuracyError("overlap quadrature did not converge for l=" + std::to_string(l.value()) +
                            " m=" + std::to_string(m.value()),
                        std::abs(res.previous), std::abs(res.value));
  }

  OverlapRecord rec;
  rec.l = l;
  rec.m = m;
  rec.n = n;
  rec.zs_ratio = geom.zs_ratio();
  rec.chi = 2.0 * std::numbers::pi * res.value;
  const double sl = mode_area(l, 0.0, geom, conv);
  const double sn = mode_area(n, 0.0, geom, conv);
  rec.chi_tilde = rec.chi / std::sqrt(sl * sn);
  rec.chi_over_s = rec.chi / sn;
  rec.convention = conv;
  rec.quad_order = res.order;
  return rec;
}

std::complex<double> chi_three_index(ModeIndex n, ModeIndex m, ModeIndex l,
                                     const BeamGeometry& geom, AreaConvention conv,
                                     const QuadratureSpec& quad) {
  if (n.value() != l.value() - m.value()) return {0.0, 0.0};
  return chi(l, m, geom, conv, quad).chi;
}

std::complex<double> stage_factor(ModeIndex l, const Drive& drive, const BeamGeometry& geom,
                                  AreaConvention conv, const QuadratureSpec& quad) {
  if (!drive) return {1.0, 0.0};
  return chi(l, *drive, geom, conv, quad).chi_over_s;
}

ConversionCoefficient conversion_coefficient(ModeIndex l, const Drive& I, const Drive& J,
                                             const BeamGeometry& geom, AreaConvention conv,
                                             const QuadratureSpec& quad, CoefficientForm form) {
  ConversionCoefficient cc;
  cc.l = l;
  cc.I = I;
  cc.J = J;
  const ModeIndex stored = l - ModeIndex(drive_shift(J));
  const ModeIndex read_signal =
      form == CoefficientForm::Coupled ? stored + ModeIndex(drive_shift(I)) : stored;
  cc.value = stage_factor(read_signal, I, geom, conv, quad) * stage_factor(l, J, geom, conv, quad);
  cc.output_oam = l.value() + drive_shift(I) - drive_shift(J);
  return cc;
}

std::vector<OverlapRecord> scan_chi(const std::vector<ModeIndex>& l_set, ModeIndex m,
                                    const std::vector<double>& zs_grid, const BeamGeometry& geom,
                                    AreaConvention conv, const QuadratureSpec& quad) {
  for (std::size_t i = 1; i < zs_grid.size(); ++i) {
    if (!(zs_grid[i] > zs_grid[i - 1])) {
      throw ConfigError("scan.zs", "z_S grid must be strictly increasing");
    }
  }
  const std::size_t nz = zs_grid.size();
  std::vector<OverlapRecord> out(l_set.size() * nz);
  parallel_for(out.size(), [&](std::size_t k) {
    const BeamGeometry g = BeamGeometry::with_zs_ratio(geom.w0, geom.wavelength, zs_grid[k % nz]);
    out[k] = chi(l_set[k / nz], m, g, conv, quad);
    out[k].zs_ratio = zs_grid[k % nz];
  });
  return out;
}

std::vector<std::size_t> curve_argmax(const std::vector<OverlapRecord>& scan,
                                      ChiNormalization norm) {
  std::vector<std::size_t> result;
  std::size_t start = 0;
  while (start < scan.size()) {
    std::size_t end = start;
    while (end < scan.size() && scan[end].l == scan[start].l && scan[end].m == scan[start].m) ++end;
    std::size_t best = 0;
    for (std::size_t k = start; k < end; ++k) {
      if (std::abs(normalized_chi(scan[k], norm)) > std::abs(normalized_chi(scan[start + best], norm)))
        best = k - start;
    }
    result.push_back(best);
    start = end;
  }
  return result;
}

}  // namespace oamq
