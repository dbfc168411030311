#include "oamq/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "oamq/errors.hpp"

namespace oamq {

namespace {

using cd = std::complex<double>;
constexpr cd I1{0.0, 1.0};

struct Stepper {
  double r;
  double kappa;
  cd chi;
  double hz;

  Eigen::VectorXcd signal(const Eigen::VectorXcd& c, cd a0) const {
    Eigen::VectorXcd a = cumulative_integral(c, hz) * (-0.5 / kappa);
    a.array() += a0;
    return a;
  }

  void rhs(const Eigen::VectorXcd& b, const Eigen::VectorXcd& c, cd a0, Eigen::VectorXcd& db,
           Eigen::VectorXcd& dc) const {
    db = -std::conj(chi) * c;
    dc = (-2.0 * I1 * r) * c + kappa * signal(c, a0) + chi * b;
  }

  void step(Eigen::VectorXcd& b, Eigen::VectorXcd& c, double dt, cd a_start, cd a_mid,
            cd a_end) const {
    Eigen::VectorXcd k1b, k1c, k2b, k2c, k3b, k3c, k4b, k4c;
    rhs(b, c, a_start, k1b, k1c);
    rhs(b + 0.5 * dt * k1b, c + 0.5 * dt * k1c, a_mid, k2b, k2c);
    rhs(b + 0.5 * dt * k2b, c + 0.5 * dt * k2c, a_mid, k3b, k3c);
    rhs(b + dt * k3b, c + dt * k3c, a_end, k4b, k4c);
    b += dt / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
    c += dt / 6.0 * (k1c + 2.0 * k2c + 2.0 * k3c + k4c);
  }
};

}  // namespace

std::string to_string(Stage s) {
  switch (s) {
    case Stage::Write: return "write";
    case Stage::Store: return "store";
    case Stage::Read: return "read";
  }
  return "?";
}

double PulseProfile::norm() const {
  if (samples.size() < 2) return 0.0;
  const auto w = trapezoid_weights(static_cast<int>(samples.size()), t.step);
  double s = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) s += w[i] * std::norm(samples[i]);
  return s;
}

std::complex<double> PulseProfile::at(double time) const {
  const int n = static_cast<int>(samples.size());
  if (n == 0) return {0.0, 0.0};
  const double x = (time - t.start) / t.step;
  if (x < -1e-12 || x > n - 1 + 1e-12) return {0.0, 0.0};
  int i = static_cast<int>(std::floor(x));
  i = std::clamp(i, 0, n - 2);
  const double u = x - i;
  auto s = [&](int k) { return samples[std::clamp(k, 0, n - 1)]; };
  // Catmull-Rom with linear extrapolation of the missing end neighbour.
  const cd p1 = s(i), p2 = s(i + 1);
  const cd p0 = i > 0 ? s(i - 1) : 2.0 * p1 - p2;
  const cd p3 = i + 2 < n ? s(i + 2) : 2.0 * p2 - p1;
  const double u2 = u * u, u3 = u2 * u;
  return 0.5 * ((2.0 * p1) + (-p0 + p2) * u + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * u2 +
                (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * u3);
}

PulseProfile PulseProfile::sample(const UniformGrid& t,
                                  const std::function<std::complex<double>(double)>& f) {
  PulseProfile p;
  p.t = t;
  p.samples.resize(t.count);
  for (int i = 0; i < t.count; ++i) p.samples[i] = f(t.at(i));
  return p;
}

Eigen::VectorXcd cumulative_integral(const Eigen::VectorXcd& f, double h) {
  const Eigen::Index n = f.size();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
  if (n < 2) return out;
  if (n < 4) {
    for (Eigen::Index i = 1; i < n; ++i) out[i] = out[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
    return out;
  }
  const double c = h / 24.0;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    cd seg;
    if (i == 0) {
      seg = c * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
    } else if (i == n - 2) {
      seg = c * (f[n - 4] - 5.0 * f[n - 3] + 19.0 * f[n - 2] + 9.0 * f[n - 1]);
    } else {
      seg = c * (-f[i - 1] + 13.0 * f[i] + 13.0 * f[i + 1] - f[i + 2]);
    }
    out[i + 1] = out[i] + seg;
  }
  return out;
}

int pde_substeps(const UniformGrid& t, double r, double chi_abs, int requested) {
  const double rate = std::max({std::abs(r), chi_abs, 1.0});
  int m = requested;
  if (m == 0) m = std::max(1, static_cast<int>(std::ceil(t.step * rate / 0.02 - 1e-9)));
  if (m < 1) throw GridError("grids.substeps must be positive");
  const double dt = t.step / m;
  if (dt * rate > 0.1) {
    throw GridError("time step " + std::to_string(dt) + " too large: dt*max(|r|,|chi|,1) = " +
                    std::to_string(dt * rate) + " > 0.1; raise grids.substeps");
  }
  return m;
}

namespace {

void check_pde_grids(const PdeGrids& g) {
  if (g.nz < 4) throw GridError("grids.nz must be >= 4 for the PDE engine");
  if (g.nt < 2) throw GridError("grids.nt must be >= 2");
}

}  // namespace

FieldState evolve_write(const PulseProfile& input, ModeIndex l, const Drive& J,
                        std::complex<double> chi, const MemoryParams& params,
                        const PdeGrids& grids, bool track_continuity) {
  params.validate();
  check_pde_grids(grids);
  FieldState s;
  s.z = UniformGrid::span(0.0, params.L_tilde, grids.nz);
  s.t = UniformGrid::span(0.0, params.T_W, grids.nt);
  s.l = l;
  s.n = l - ModeIndex(drive_shift(J));
  s.stage = Stage::Write;
  s.substeps = pde_substeps(s.t, params.r, std::abs(chi), grids.substeps);
  s.b = Eigen::VectorXcd::Zero(grids.nz);
  s.c = Eigen::VectorXcd::Zero(grids.nz);
  s.a = Eigen::MatrixXcd::Zero(grids.nz, grids.nt);

  const Stepper st{params.r, params.kappa(), chi, s.z.step};
  const double dt = s.t.step / s.substeps;
  const double eps2 = params.epsilon2;

  Eigen::ArrayXd energy, flux;
  auto measure = [&](cd a0) {
    const Eigen::VectorXcd a = st.signal(s.c, a0);
    energy = s.b.array().abs2() + s.c.array().abs2();
    flux = -(a.conjugate().array() * s.c.array()).real() / st.kappa;
  };
  double max_res = 0.0, max_flux = 0.0;
  if (track_continuity) measure(input.at(0.0));

  s.a.col(0) = st.signal(s.c, input.at(0.0));
  for (int j = 1; j < s.t.count; ++j) {
    for (int k = 0; k < s.substeps; ++k) {
      const double t0 = s.t.at(j - 1) + k * dt;
      st.step(s.b, s.c, dt, input.at(t0), input.at(t0 + 0.5 * dt), input.at(t0 + dt));
      if (track_continuity) {
        const Eigen::ArrayXd e0 = energy, d0 = flux;
        measure(input.at(t0 + dt));
        const Eigen::ArrayXd res = eps2 * (energy - e0) / dt + 0.5 * (flux + d0);
        max_res = std::max(max_res, res.abs().maxCoeff());
        max_flux = std::max(max_flux, flux.abs().maxCoeff());
      }
    }
    s.a.col(j) = st.signal(s.c, input.at(s.t.at(j)));
  }
  if (track_continuity) s.continuity_residual = max_flux > 0.0 ? max_res / max_flux : 0.0;
  return s;
}

FieldState apply_storage(FieldState state) {
  if (state.stage == Stage::Read) throw StageError("storage requires a written or stored state");
  state.c.setZero();
  state.stage = Stage::Store;
  return state;
}

ReadResult evolve_read(const FieldState& state, const Drive& I, std::complex<double> chi_read,
                       const MemoryParams& params, const PdeGrids& grids) {
  if (state.stage != Stage::Store) throw StageError("read requires a stored state");
  params.validate();
  check_pde_grids(grids);
  if (grids.nz != state.z.count) throw GridError("read z grid differs from the stored state");

  ReadResult out;
  FieldState s = state;
  s.t = UniformGrid::span(0.0, params.T_R, grids.nt);
  s.l = s.n + ModeIndex(drive_shift(I));
  s.stage = Stage::Read;
  s.substeps = pde_substeps(s.t, params.r, std::abs(chi_read), grids.substeps);
  s.a = Eigen::MatrixXcd::Zero(grids.nz, grids.nt);

  const Stepper st{params.r, params.kappa(), chi_read, s.z.step};
  const double dt = s.t.step / s.substeps;
  out.output.t = s.t;
  out.output.samples.resize(s.t.count);
  out.output.samples[0] = 0.0;
  for (int j = 1; j < s.t.count; ++j) {
    for (int k = 0; k < s.substeps; ++k) st.step(s.b, s.c, dt, 0.0, 0.0, 0.0);
    s.a.col(j) = st.signal(s.c, 0.0);
    out.output.samples[j] = s.a(s.z.count - 1, j);
  }
  out.output_oam = s.l.value();
  out.state = std::move(s);
  return out;
}

}  // namespace oamq
