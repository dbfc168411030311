#pragma once

// Closed-form kernels of the write, read, and full memory cycle in
// dimensionless units (t = Omega t, z = 2 g^2 N z / Omega).

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "oamq/modes.hpp"
#include "oamq/overlap.hpp"

namespace oamq {

struct MemoryParams {
  double r = 50.0;        // detuning Delta / (2 Omega), signed
  double chi_eff = 1.0;   // |chi| of the active drive, 1 for a plane wave
  double L_tilde = 50.0;
  double T_W = 10.0;
  double T_R = 10.0;
  double epsilon2 = 0.5;  // Omega^2 / (2 g^2 N)

  /// g sqrt(N) / Omega = 1 / sqrt(2 epsilon2)
  double kappa() const;
  /// Throws ConfigError on non-positive lengths, durations or epsilon2.
  void validate() const;
};

struct AuxiliaryFactors {
  double mu = 1.0;
  double nu = 1.0;
  double omega_eff = 1.0;  // sqrt(r^2 + chi^2)
};

/// Throws GridError when r = chi = 0, where mu and nu are undefined.
AuxiliaryFactors auxiliary_factors(double r, double chi_eff);

/// exp(-i (omega_eff + r) t) J0(sqrt(z t mu)) on 0 <= t <= support, zero outside.
std::complex<double> f0_factor(double z, double t, double r, double chi_eff,
                               double support = std::numeric_limits<double>::infinity());

/// Raman-limit form of f0: exp(-2 i r t) J0(sqrt(2 z t)).
std::complex<double> f0_raman_limit(double z, double t, double r);

struct ConvolutionSpec {
  double max_step = 0.01;
  int min_steps = 256;  // per support length
};

/// Convolution of f0(., r) with conj f0(., -r), both supported on
/// [0, support]. Serves as both the write and the read kernel. The
/// oscillation exp(-2 i omega_eff t') is integrated exactly (Filon-Simpson).
std::complex<double> g_kernel(double z, double t, double r, double chi_eff, double support,
                              const ConvolutionSpec& spec = {});
std::complex<double> g_kernel(double z, double t, const MemoryParams& params,
                              const ConvolutionSpec& spec = {});

/// [1 * f_lim](z, t) = int_0^t exp(-2 i r t') J0(sqrt(2 z t')) dt'.
std::complex<double> g_kernel_raman_limit(double z, double t, double r,
                                          const ConvolutionSpec& spec = {});

/// Composite Simpson convolution int_0^t f(t') g(t - t') dt' with an even
/// number of steps. Brute-force reference used for cross-checks.
std::complex<double> time_convolution(const std::function<std::complex<double>(double)>& f,
                                      const std::function<std::complex<double>(double)>& g,
                                      double t, int steps);

struct UniformGrid {
  double start = 0.0;
  double step = 1.0;
  int count = 0;

  double at(int i) const { return start + step * i; }
  double end() const { return at(count - 1); }
  double length() const { return step * (count - 1); }

  /// count >= 2 points spanning [a, b]; throws GridError otherwise.
  static UniformGrid span(double a, double b, int count);
};

/// G(z_i, t_j) on uniform grids with t starting at 0. The fine convolution
/// step is t.step / substeps; substeps = 0 picks it from ConvolutionSpec.
/// Throws GridError when the fine step exceeds t.length() / 64.
Eigen::MatrixXcd g_kernel_table(const UniformGrid& z, const UniformGrid& t, double r,
                                double chi_eff, int substeps = 0,
                                const ConvolutionSpec& spec = {});
Eigen::MatrixXcd g_kernel_raman_limit_table(const UniformGrid& z, const UniformGrid& t, double r,
                                            int substeps = 0, const ConvolutionSpec& spec = {});

/// Fine substeps per coarse step used when substeps = 0. Always even.
int auto_substeps(const UniformGrid& t, const ConvolutionSpec& spec);

struct KernelGrids {
  int nz = 201;
  int nt = 201;
  int substeps = 0;
};

struct KernelMeta {
  std::string kind = "K";
  MemoryParams params;
  int l = 0;
  Drive I;
  Drive J;
  std::complex<double> chi_write{1.0, 0.0};
  std::complex<double> chi_read{1.0, 0.0};
  ChiNormalization chi_norm = ChiNormalization::Appendix;
  AreaConvention convention = AreaConvention::Half;
  /// When true, values carry an extra exp(+i phase_rate t) on axis1, removing
  /// the common exp(-i phase_rate t) of the retrieved amplitude.
  bool phase_factored = false;
  double phase_rate = 0.0;
  std::string z_rule = "simpson";
  int substeps = 0;
};

struct KernelGrid {
  UniformGrid axis1;
  UniformGrid axis2;
  std::string axis1_name = "t";
  std::string axis2_name = "t_prime";
  Eigen::MatrixXcd values;
  std::vector<double> weights1;  // trapezoid
  std::vector<double> weights2;
  KernelMeta meta;
};

/// Couplings entering each stage: normalized chi of the write drive (signal
/// l, drive J) and of the read drive (signal l + I - J, drive I).
struct StageCouplings {
  std::complex<double> write{1.0, 0.0};
  std::complex<double> read{1.0, 0.0};
};

/// K(t, t') = 1/2 int_0^L dz G_R(L - z, t) G_W(z, T_W - t') on the read
/// (axis1) and write (axis2) time grids, z-integrated with Simpson weights
/// (nz must be odd). The retrieved amplitude is
/// chi_read conj(chi_write) int K(t, t') a_in(t') dt'.
KernelGrid full_cycle_kernel(ModeIndex l, const Drive& I, const Drive& J, MemoryParams params,
                             const KernelGrids& grids, const StageCouplings& couplings = {},
                             bool factor_phase = false);

/// Multiplies row i by exp(+2 i r t_i) and records it in the metadata.
/// Applying it to an already factored kernel is a no-op.
void factor_common_phase(KernelGrid& k);

}  // namespace oamq
