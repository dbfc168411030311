#pragma once

// Flat key = value run configuration with dotted section keys, e.g.
//   geometry.w0 = 1e-3
//   scan.l = 0,1,2
// '#' starts a comment. Unknown keys and malformed values raise ConfigError
// naming the key.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "oamq/kernels.hpp"
#include "oamq/memory_cycle.hpp"
#include "oamq/modes.hpp"
#include "oamq/overlap.hpp"
#include "oamq/quadrature.hpp"

namespace oamq {

struct RunConfig {
  // geometry (metres)
  double w0 = 1e-3;
  double wavelength = 795e-9;
  double zs_ratio = 0.0;
  double cell_length = 0.0;  // 0 selects z_R / 100
  double cell_area = 0.0;    // 0 selects pi w0^2
  ConstraintThresholds thresholds;

  AreaConvention convention = AreaConvention::Half;
  ChiNormalization chi_norm = ChiNormalization::Appendix;
  CoefficientForm coefficient_form = CoefficientForm::Coupled;

  MemoryParams memory;
  KernelGrids kernel_grids;
  PdeGrids pde_grids;
  QuadratureSpec quad;

  std::vector<int> scan_l;
  std::vector<int> scan_m{0};
  double scan_zs_min = 0.0;
  double scan_zs_max = 5.0;
  int scan_zs_count = 101;

  int cycle_l = 0;
  Drive cycle_J;
  Drive cycle_I;
  Engine engine = Engine::Kernel;
  double disagreement_threshold = 1e-2;  // relative L2, engine = both
  std::string pulse = "sin2";

  std::string kernel_kind = "K";
  bool kernel_factor_phase = false;

  double opt_L_min = 1.0, opt_L_max = 200.0;
  int opt_L_count = 20;
  double opt_T_min = 1.0, opt_T_max = 40.0;
  int opt_T_count = 20;

  std::string output_path;

  BeamGeometry geometry() const;
  CellGeometry cell() const;
  std::vector<double> zs_grid() const;

  /// Every key with its current value, sorted by key, one "key = value" per line.
  std::string canonical() const;
  /// FNV-1a 64 of canonical() without the output.path line, as 16 hex digits.
  std::string hash() const;
};

/// All accepted keys, sorted.
const std::vector<std::string>& config_keys();

void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value);
RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});
/// Checks cross-field consistency; throws ConfigError naming the key.
void validate_config(const RunConfig& cfg);

std::uint64_t fnv1a64(std::string_view data);
/// printf("%.17g")
std::string format_double(double v);

}  // namespace oamq
