#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oamq/dynamics.hpp"
#include "oamq/kernels.hpp"
#include "oamq/modes.hpp"
#include "oamq/overlap.hpp"

namespace oamq {

struct SingularSpectrum {
  std::vector<double> values;  // descending
  Eigen::MatrixXcd left;       // columns on axis1, orthonormal under weights1
  Eigen::MatrixXcd right;      // columns on axis2, orthonormal under weights2
};

/// SVD of diag(sqrt w1) K diag(sqrt w2), with the weights divided back out of
/// the singular vectors. Throws GridError on non-finite entries.
SingularSpectrum discretize_and_decompose(const KernelGrid& k);

/// Largest singular value only; same weighting as discretize_and_decompose.
double leading_singular_value(const KernelGrid& k);

struct OptimizeSearch {
  std::vector<double> L_values;
  std::vector<double> T_values;
};

struct OptimizeResult {
  MemoryParams best;
  double best_singular_value = 0.0;
  Eigen::MatrixXd table;  // leading singular value, rows L, cols T
};

/// Grid search for the (L_tilde, T_W) that maximize the leading singular
/// value of the plane-wave cycle kernel, with T_R = T_W. Ties go to the
/// smallest L_tilde, then the smallest T_W.
OptimizeResult optimize_parameters(const OptimizeSearch& search, const MemoryParams& base,
                                   const KernelGrids& grids);

/// Evenly spaced values from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, int count);

enum class Engine { Kernel, Pde, Both };
std::string to_string(Engine e);
Engine parse_engine(std::string_view text);

struct CycleOptions {
  Engine engine = Engine::Kernel;
  AreaConvention convention = AreaConvention::Half;
  ChiNormalization chi_norm = ChiNormalization::Appendix;
  CoefficientForm coefficient_form = CoefficientForm::Coupled;
  QuadratureSpec quad;
  KernelGrids kernel_grids;
  PdeGrids pde_grids;
  ConstraintThresholds thresholds;
  double disagreement_threshold = 1e-2;
};

struct CycleReport {
  int l_in = 0;
  Drive J;
  Drive I;
  int l_out = 0;
  std::string engine;
  double efficiency = 0.0;  // ||a_out||^2 / ||a_in||^2
  std::optional<double> pde_efficiency;
  std::complex<double> chi_write{1.0, 0.0};
  std::complex<double> chi_read{1.0, 0.0};
  /// chi_read conj(chi_write) as applied to the kernel
  std::complex<double> conversion_factor{1.0, 0.0};
  /// Main-text coefficient from the overlap module
  std::complex<double> conversion_coefficient{1.0, 0.0};
  double leading_singular_value = 0.0;
  std::optional<double> engine_disagreement;
  bool flagged = false;
  AreaConvention convention = AreaConvention::Half;
  ChiNormalization chi_norm = ChiNormalization::Appendix;
  CoefficientForm coefficient_form = CoefficientForm::Coupled;
  MemoryParams params;
  KernelGrids kernel_grids;
  PdeGrids pde_grids;
  BeamGeometry geometry;
};

struct CycleResult {
  CycleReport report;
  PulseProfile output;  // kernel output, or PDE output for Engine::Pde
  std::optional<PulseProfile> pde_output;
};

/// Write with drive J, store, read with drive I. The geometry must pass
/// check_paraxial_constraints for the given cell, otherwise GeometryError.
/// The input pulse must be sampled on the kernel write grid.
CycleResult run_cycle(const PulseProfile& input, ModeIndex l, const Drive& J, const Drive& I,
                      const BeamGeometry& geom, const CellGeometry& cell, MemoryParams params,
                      const CycleOptions& options = {});

/// Applies a_out = factor int K a dt' with trapezoid weights.
PulseProfile apply_kernel(const KernelGrid& k, const PulseProfile& input,
                          std::complex<double> factor);

/// ||x - y|| / ||y|| with trapezoid weights; grids must match.
double relative_l2(const PulseProfile& x, const PulseProfile& y);

}  // namespace oamq
