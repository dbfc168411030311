#include "oamq/kernels.hpp"

#include <cmath>

#include "oamq/bessel.hpp"
#include "oamq/errors.hpp"
#include "oamq/parallel.hpp"

namespace oamq {

namespace {

using cd = std::complex<double>;
constexpr cd I1{0.0, 1.0};

// Weights of int_0^{2h} exp(-i omega s) f(s) ds ~ alpha f(0) + beta f(h) + gamma f(2h)
// with f replaced by its quadratic interpolant.
struct FilonWeights {
  cd alpha, beta, gamma;
};

FilonWeights filon_simpson(double omega, double h) {
  const cd kappa = -I1 * omega;
  const double H = 2.0 * h;
  cd m0, m1, m2;
  if (std::abs(kappa * H) < 1.0) {
    cd kp{1.0, 0.0};
    double fact = 1.0;
    for (int k = 0; k < 40; ++k) {
      if (k > 0) {
        kp *= kappa * H;
        fact *= k;
      }
      const cd c = kp / fact;
      m0 += c * H / double(k + 1);
      m1 += c * H * H / double(k + 2);
      m2 += c * H * H * H / double(k + 3);
    }
  } else {
    const cd e = std::exp(kappa * H);
    m0 = (e - 1.0) / kappa;
    m1 = (H * e - m0) / kappa;
    m2 = (H * H * e - 2.0 * m1) / kappa;
  }
  const double h2 = h * h;
  return {(m2 - 3.0 * h * m1 + 2.0 * h2 * m0) / (2.0 * h2), -(m2 - 2.0 * h * m1) / h2,
          (m2 - h * m1) / (2.0 * h2)};
}

int even_ceil(double x) {
  int n = static_cast<int>(std::ceil(x - 1e-9));
  if (n < 2) n = 2;
  if (n % 2) ++n;
  return n;
}

double j0_sqrt(double x) { return bessel_j0(std::sqrt(std::max(x, 0.0))); }

}  // namespace

double MemoryParams::kappa() const { return 1.0 / std::sqrt(2.0 * epsilon2); }

void MemoryParams::validate() const {
  if (!std::isfinite(r)) throw ConfigError("memory.r", "must be finite");
  if (!(L_tilde > 0.0)) throw ConfigError("memory.L_tilde", "must be positive");
  if (!(T_W > 0.0)) throw ConfigError("memory.T_W", "must be positive");
  if (!(T_R > 0.0)) throw ConfigError("memory.T_R", "must be positive");
  if (!(epsilon2 > 0.0)) throw ConfigError("memory.epsilon2", "must be positive");
  if (!(chi_eff >= 0.0) || !std::isfinite(chi_eff))
    throw ConfigError("memory.chi_eff", "must be finite and nonnegative");
}

AuxiliaryFactors auxiliary_factors(double r, double chi_eff) {
  const double omega = std::hypot(r, chi_eff);
  if (omega == 0.0) throw GridError("auxiliary factors undefined for r = chi = 0");
  AuxiliaryFactors a;
  a.omega_eff = omega;
  a.mu = 1.0 + r / omega;
  a.nu = 1.0 - r / omega;
  return a;
}

std::complex<double> f0_factor(double z, double t, double r, double chi_eff, double support) {
  if (t < 0.0 || t > support) return {0.0, 0.0};
  const auto aux = auxiliary_factors(r, chi_eff);
  const double radicand = z * t * aux.mu;
  if (radicand < -1e-300) throw std::logic_error("negative Bessel radicand in f0");
  return std::polar(1.0, -(aux.omega_eff + r) * t) * j0_sqrt(radicand);
}

std::complex<double> f0_raman_limit(double z, double t, double r) {
  if (t < 0.0) return {0.0, 0.0};
  return std::polar(1.0, -2.0 * r * t) * j0_sqrt(2.0 * z * t);
}

std::complex<double> g_kernel(double z, double t, double r, double chi_eff, double support,
                              const ConvolutionSpec& spec) {
  if (t < 0.0) throw GridError("g_kernel requires t >= 0");
  const double lo = std::max(0.0, t - support);
  const double hi = std::min(t, support);
  if (!(hi > lo)) return {0.0, 0.0};
  const auto aux = auxiliary_factors(r, chi_eff);
  const double h_max = std::min(support / spec.min_steps, spec.max_step);
  const int n = even_ceil((hi - lo) / h_max);
  const double h = (hi - lo) / n;
  const double omega = 2.0 * aux.omega_eff;
  const auto w = filon_simpson(omega, h);
  auto u = [&](int k) {
    const double t1 = lo + k * h;
    return j0_sqrt(z * aux.mu * t1) * j0_sqrt(z * aux.nu * (t - t1));
  };
  cd sum;
  for (int j = 0; j < n / 2; ++j) {
    const double a = lo + 2.0 * j * h;
    sum += std::polar(1.0, -omega * a) * (w.alpha * u(2 * j) + w.beta * u(2 * j + 1) + w.gamma * u(2 * j + 2));
  }
  return std::polar(1.0, (aux.omega_eff - r) * t) * sum;
}

std::complex<double> g_kernel(double z, double t, const MemoryParams& params,
                              const ConvolutionSpec& spec) {
  return g_kernel(z, t, params.r, params.chi_eff, params.T_W, spec);
}

std::complex<double> g_kernel_raman_limit(double z, double t, double r,
                                          const ConvolutionSpec& spec) {
  if (t < 0.0) throw GridError("g_kernel_raman_limit requires t >= 0");
  if (t == 0.0) return {0.0, 0.0};
  const double h_max = std::min(t / spec.min_steps, spec.max_step);
  const int n = even_ceil(t / h_max);
  const double h = t / n;
  const double omega = 2.0 * r;
  const auto w = filon_simpson(omega, h);
  auto u = [&](int k) { return j0_sqrt(2.0 * z * k * h); };
  cd sum;
  for (int j = 0; j < n / 2; ++j) {
    sum += std::polar(1.0, -omega * 2.0 * j * h) *
           (w.alpha * u(2 * j) + w.beta * u(2 * j + 1) + w.gamma * u(2 * j + 2));
  }
  return sum;
}

std::complex<double> time_convolution(const std::function<std::complex<double>(double)>& f,
                                      const std::function<std::complex<double>(double)>& g,
                                      double t, int steps) {
  if (steps < 2 || steps % 2) throw GridError("time_convolution needs an even step count");
  if (t == 0.0) return {0.0, 0.0};
  const double h = t / steps;
  cd sum;
  for (int k = 0; k <= steps; ++k) {
    const double wk = (k == 0 || k == steps) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    sum += wk * f(k * h) * g(t - k * h);
  }
  return sum * h / 3.0;
}

UniformGrid UniformGrid::span(double a, double b, int count) {
  if (count < 2) throw GridError("a grid needs at least two points");
  if (!(b > a)) throw GridError("grid end must exceed its start");
  return {a, (b - a) / (count - 1), count};
}

int auto_substeps(const UniformGrid& t, const ConvolutionSpec& spec) {
  const double h_max = std::min(t.length() / spec.min_steps, spec.max_step);
  return even_ceil(t.step / h_max);
}

namespace {

void check_table_grids(const UniformGrid& z, const UniformGrid& t, int substeps) {
  if (z.count < 1 || t.count < 2) throw GridError("kernel table needs nonempty grids");
  if (t.start != 0.0) throw GridError("kernel time grid must start at 0");
  if (substeps < 2 || substeps % 2) throw GridError("convolution substeps must be even and >= 2");
  const double h = t.step / substeps;
  if (h > t.length() / 64.0) {
    throw GridError("convolution step " + std::to_string(h) + " exceeds T/64 = " +
                    std::to_string(t.length() / 64.0) +
                    "; increase grids.nt or grids.substeps");
  }
}

}  // namespace

Eigen::MatrixXcd g_kernel_table(const UniformGrid& z, const UniformGrid& t, double r,
                                double chi_eff, int substeps, const ConvolutionSpec& spec) {
  if (substeps == 0) substeps = auto_substeps(t, spec);
  check_table_grids(z, t, substeps);
  const auto aux = auxiliary_factors(r, chi_eff);
  const int M = substeps;
  const int N = (t.count - 1) * M;
  const double h = t.step / M;
  const double omega = 2.0 * aux.omega_eff;
  const auto w = filon_simpson(omega, h);

  std::vector<cd> panel_phase(N / 2);
  for (int j = 0; j < N / 2; ++j) panel_phase[j] = std::polar(1.0, -omega * 2.0 * j * h);
  std::vector<cd> outer(t.count);
  for (int i = 0; i < t.count; ++i) outer[i] = std::polar(1.0, (aux.omega_eff - r) * t.at(i));

  Eigen::MatrixXcd out(z.count, t.count);
  parallel_for(static_cast<std::size_t>(z.count), [&](std::size_t zi) {
    const double zv = z.at(static_cast<int>(zi));
    std::vector<double> p(N + 1), q(N + 1);
    for (int k = 0; k <= N; ++k) {
      p[k] = j0_sqrt(zv * aux.mu * k * h);
      q[k] = j0_sqrt(zv * aux.nu * k * h);
    }
    out(zi, 0) = 0.0;
    for (int i = 1; i < t.count; ++i) {
      const int n = i * M;
      cd sum;
      for (int j = 0; j < n / 2; ++j) {
        const int k = 2 * j;
        sum += panel_phase[j] *
               (w.alpha * p[k] * q[n - k] + w.beta * p[k + 1] * q[n - k - 1] + w.gamma * p[k + 2] * q[n - k - 2]);
      }
      out(zi, i) = outer[i] * sum;
    }
  });
  return out;
}

Eigen::MatrixXcd g_kernel_raman_limit_table(const UniformGrid& z, const UniformGrid& t, double r,
                                            int substeps, const ConvolutionSpec& spec) {
  if (substeps == 0) substeps = auto_substeps(t, spec);
  check_table_grids(z, t, substeps);
  const int M = substeps;
  const int N = (t.count - 1) * M;
  const double h = t.step / M;
  const double omega = 2.0 * r;
  const auto w = filon_simpson(omega, h);

  Eigen::MatrixXcd out(z.count, t.count);
  parallel_for(static_cast<std::size_t>(z.count), [&](std::size_t zi) {
    const double zv = z.at(static_cast<int>(zi));
    std::vector<double> u(N + 1);
    for (int k = 0; k <= N; ++k) u[k] = j0_sqrt(2.0 * zv * k * h);
    cd sum;
    out(zi, 0) = 0.0;
    for (int j = 0; j < N / 2; ++j) {
      const int k = 2 * j;
      sum += std::polar(1.0, -omega * k * h) * (w.alpha * u[k] + w.beta * u[k + 1] + w.gamma * u[k + 2]);
      if ((k + 2) % M == 0) out(zi, (k + 2) / M) = sum;
    }
  });
  return out;
}

KernelGrid full_cycle_kernel(ModeIndex l, const Drive& I, const Drive& J, MemoryParams params,
                             const KernelGrids& grids, const StageCouplings& couplings,
                             bool factor_phase) {
  params.validate();
  if (grids.nz < 3 || grids.nz % 2 == 0) throw GridError("grids.nz must be odd and >= 3");
  const auto zg = UniformGrid::span(0.0, params.L_tilde, grids.nz);
  const auto tw = UniformGrid::span(0.0, params.T_W, grids.nt);
  const auto tr = UniformGrid::span(0.0, params.T_R, grids.nt);
  const double chi_w = std::abs(couplings.write);
  const double chi_r = std::abs(couplings.read);

  const int sub_w = grids.substeps ? grids.substeps : auto_substeps(tw, {});
  const int sub_r = grids.substeps ? grids.substeps : auto_substeps(tr, {});
  const Eigen::MatrixXcd gw = g_kernel_table(zg, tw, params.r, chi_w, sub_w);
  const Eigen::MatrixXcd gr = (params.T_R == params.T_W && chi_r == chi_w)
                                  ? gw
                                  : g_kernel_table(zg, tr, params.r, chi_r, sub_r);

  const auto wz = simpson_weights(zg.count, zg.step);
  Eigen::VectorXd wzv = Eigen::Map<const Eigen::VectorXd>(wz.data(), wz.size());
  // A(k, i) = G_R(L - z_k, t_i), B(k, j) = G_W(z_k, T_W - t'_j)
  const Eigen::MatrixXcd a = gr.colwise().reverse();
  const Eigen::MatrixXcd b = gw.rowwise().reverse();

  KernelGrid k;
  k.axis1 = tr;
  k.axis2 = tw;
  k.values = 0.5 * (a.transpose() * (wzv.asDiagonal() * b));
  k.weights1 = trapezoid_weights(tr.count, tr.step);
  k.weights2 = trapezoid_weights(tw.count, tw.step);
  k.meta.kind = "K";
  k.meta.params = params;
  k.meta.params.chi_eff = chi_w;
  k.meta.l = l.value();
  k.meta.I = I;
  k.meta.J = J;
  k.meta.chi_write = couplings.write;
  k.meta.chi_read = couplings.read;
  k.meta.substeps = sub_w;
  if (factor_phase) factor_common_phase(k);
  return k;
}

void factor_common_phase(KernelGrid& k) {
  if (k.meta.phase_factored) return;
  const double rate = 2.0 * k.meta.params.r;
  for (int i = 0; i < k.axis1.count; ++i) k.values.row(i) *= std::polar(1.0, rate * k.axis1.at(i));
  k.meta.phase_factored = true;
  k.meta.phase_rate = rate;
}

}  // namespace oamq
