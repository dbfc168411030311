#pragma once

// Direct integration of the coupled signal / optical-coherence / spin-coherence
// equations with the drive's overlap factor:
//   d_z a = -c / (2 kappa)
//   d_t c = -2 i r c + kappa a + chi b
//   d_t b = -conj(chi) c
// The a-equation is integrated in z at every stage of an RK4 step in t.

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "oamq/kernels.hpp"
#include "oamq/overlap.hpp"

namespace oamq {

enum class Stage { Write, Store, Read };
std::string to_string(Stage s);

struct PulseProfile {
  UniformGrid t;
  std::vector<std::complex<double>> samples;

  /// Trapezoid estimate of int |a|^2 dt.
  double norm() const;
  /// Catmull-Rom interpolation between samples, zero outside the grid.
  std::complex<double> at(double time) const;

  static PulseProfile sample(const UniformGrid& t,
                             const std::function<std::complex<double>(double)>& f);
};

struct PdeGrids {
  int nz = 201;
  int nt = 201;        // output samples per stage
  int substeps = 0;    // RK4 steps per output interval, 0 picks dt max(|r|, |chi|, 1) <= 0.02
};

struct FieldState {
  UniformGrid z;
  UniformGrid t;
  Eigen::MatrixXcd a;  // a(z_i, t_j) at the output samples of the last evolved stage
  Eigen::VectorXcd b;
  Eigen::VectorXcd c;
  ModeIndex l;         // signal index of the last evolved stage
  ModeIndex n;         // coherence index
  Stage stage = Stage::Write;
  int substeps = 0;
  /// max over z and steps of |eps2 (E^{k+1} - E^k)/dt + (D^{k+1} + D^k)/2|
  /// divided by max |D|, with E = |b|^2 + |c|^2 and D = d_z |a|^2. NaN
  /// unless requested.
  double continuity_residual = std::numeric_limits<double>::quiet_NaN();
};

/// RK4 steps per output interval for a given coupling, honouring a user value.
/// Throws GridError if dt max(|r|, |chi|, 1) > 0.1.
int pde_substeps(const UniformGrid& t, double r, double chi_abs, int requested);

FieldState evolve_write(const PulseProfile& input, ModeIndex l, const Drive& J,
                        std::complex<double> chi, const MemoryParams& params,
                        const PdeGrids& grids, bool track_continuity = false);

/// Zeroes c and keeps b. Valid after the write stage or on a stored state.
FieldState apply_storage(FieldState state);

struct ReadResult {
  PulseProfile output;  // a(L, t) on [0, T_R]
  int output_oam = 0;   // stored index + I
  FieldState state;
};

/// Requires a stored state; the signal input at z = 0 is zero.
ReadResult evolve_read(const FieldState& state, const Drive& I, std::complex<double> chi_read,
                       const MemoryParams& params, const PdeGrids& grids);

/// Fourth-order cumulative integral of samples with step h.
Eigen::VectorXcd cumulative_integral(const Eigen::VectorXcd& f, double h);

}  // namespace oamq
