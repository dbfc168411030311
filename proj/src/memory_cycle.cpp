#include "oamq/memory_cycle.hpp"

#include <cmath>

#include "oamq/errors.hpp"
#include "oamq/parallel.hpp"

namespace oamq {

SingularSpectrum discretize_and_decompose(const KernelGrid& k) {
  if (!k.values.allFinite()) throw GridError("kernel has non-finite entries");
  const auto n1 = k.values.rows();
  const auto n2 = k.values.cols();
  if (static_cast<Eigen::Index>(k.weights1.size()) != n1 ||
      static_cast<Eigen::Index>(k.weights2.size()) != n2) {
    throw GridError("kernel weights do not match its shape");
  }
  const Eigen::VectorXd s1 = Eigen::Map<const Eigen::VectorXd>(k.weights1.data(), n1).cwiseSqrt();
  const Eigen::VectorXd s2 = Eigen::Map<const Eigen::VectorXd>(k.weights2.data(), n2).cwiseSqrt();
  const Eigen::MatrixXcd m = s1.asDiagonal() * k.values * s2.asDiagonal();
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);

  SingularSpectrum out;
  const auto& sv = svd.singularValues();
  out.values.assign(sv.data(), sv.data() + sv.size());
  out.left = s1.cwiseInverse().asDiagonal() * svd.matrixU();
  out.right = s2.cwiseInverse().asDiagonal() * svd.matrixV();
  return out;
}

double leading_singular_value(const KernelGrid& k) {
  if (!k.values.allFinite()) throw GridError("kernel has non-finite entries");
  const Eigen::VectorXd s1 =
      Eigen::Map<const Eigen::VectorXd>(k.weights1.data(), k.values.rows()).cwiseSqrt();
  const Eigen::VectorXd s2 =
      Eigen::Map<const Eigen::VectorXd>(k.weights2.data(), k.values.cols()).cwiseSqrt();
  const Eigen::MatrixXcd m = s1.asDiagonal() * k.values * s2.asDiagonal();
  return Eigen::BDCSVD<Eigen::MatrixXcd>(m).singularValues()(0);
}

std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 1) return {};
  if (count == 1) return {lo};
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) v[i] = lo + (hi - lo) * i / (count - 1);
  return v;
}

OptimizeResult optimize_parameters(const OptimizeSearch& search, const MemoryParams& base,
                                   const KernelGrids& grids) {
  if (search.L_values.empty() || search.T_values.empty()) {
    throw ConfigError("optimize", "search range is empty");
  }
  const std::size_t nl = search.L_values.size();
  const std::size_t nt = search.T_values.size();
  OptimizeResult res;
  res.table.resize(nl, nt);
  parallel_for(nl * nt, [&](std::size_t idx) {
    MemoryParams p = base;
    p.L_tilde = search.L_values[idx / nt];
    p.T_W = p.T_R = search.T_values[idx % nt];
    p.chi_eff = 1.0;
    const auto k = full_cycle_kernel(ModeIndex(0), std::nullopt, std::nullopt, p, grids);
    res.table(idx / nt, idx % nt) = leading_singular_value(k);
  });

  double best = -1.0;
  double best_l = 0.0, best_t = 0.0;
  for (std::size_t i = 0; i < nl; ++i) {
    for (std::size_t j = 0; j < nt; ++j) {
      const double v = res.table(i, j);
      const double L = search.L_values[i], T = search.T_values[j];
      const bool better = v > best || (v == best && (L < best_l || (L == best_l && T < best_t)));
      if (better) {
        best = v;
        best_l = L;
        best_t = T;
      }
    }
  }
  res.best = base;
  res.best.chi_eff = 1.0;
  res.best.L_tilde = best_l;
  res.best.T_W = res.best.T_R = best_t;
  res.best_singular_value = best;
  return res;
}

std::string to_string(Engine e) {
  switch (e) {
    case Engine::Kernel: return "kernel";
    case Engine::Pde: return "pde";
    case Engine::Both: return "both";
  }
  return "?";
}

Engine parse_engine(std::string_view text) {
  if (text == "kernel") return Engine::Kernel;
  if (text == "pde") return Engine::Pde;
  if (text == "both") return Engine::Both;
  throw ConfigError("cycle.engine", "expected 'kernel', 'pde' or 'both', got '" + std::string(text) + "'");
}

PulseProfile apply_kernel(const KernelGrid& k, const PulseProfile& input,
                          std::complex<double> factor) {
  if (static_cast<Eigen::Index>(input.samples.size()) != k.values.cols()) {
    throw GridError("input pulse does not match the kernel's write grid");
  }
  Eigen::VectorXcd a(input.samples.size());
  for (Eigen::Index j = 0; j < a.size(); ++j) a[j] = input.samples[j] * k.weights2[j];
  const Eigen::VectorXcd out = factor * (k.values * a);
  PulseProfile p;
  p.t = k.axis1;
  p.samples.assign(out.data(), out.data() + out.size());
  if (k.meta.phase_factored) {
    for (int i = 0; i < p.t.count; ++i) p.samples[i] *= std::polar(1.0, -k.meta.phase_rate * p.t.at(i));
  }
  return p;
}

double relative_l2(const PulseProfile& x, const PulseProfile& y) {
  if (x.samples.size() != y.samples.size()) throw GridError("pulse grids differ");
  PulseProfile d = x;
  for (std::size_t i = 0; i < d.samples.size(); ++i) d.samples[i] -= y.samples[i];
  const double ny = y.norm();
  return ny > 0.0 ? std::sqrt(d.norm() / ny) : std::sqrt(d.norm());
}

CycleResult run_cycle(const PulseProfile& input, ModeIndex l, const Drive& J, const Drive& I,
                      const BeamGeometry& geom, const CellGeometry& cell, MemoryParams params,
                      const CycleOptions& opt) {
  geom.validate();
  const auto validity = check_paraxial_constraints(geom, cell, opt.thresholds);
  if (!validity.pass()) {
    std::string failed;
    for (const auto* c : {&validity.length, &validity.area, &validity.paraxial}) {
      if (!c->pass) failed += (failed.empty() ? "" : ", ") + c->name + " (" + c->requirement + ")";
    }
    throw GeometryError("cell geometry outside the diffraction-free regime: " + failed);
  }
  params.validate();

  CycleResult res;
  auto& rep = res.report;
  rep.l_in = l.value();
  rep.J = J;
  rep.I = I;
  const ModeIndex stored = l - ModeIndex(drive_shift(J));
  const ModeIndex out_mode = stored + ModeIndex(drive_shift(I));
  rep.l_out = out_mode.value();
  rep.engine = to_string(opt.engine);
  rep.convention = opt.convention;
  rep.chi_norm = opt.chi_norm;
  rep.coefficient_form = opt.coefficient_form;
  rep.kernel_grids = opt.kernel_grids;
  rep.pde_grids = opt.pde_grids;
  rep.geometry = geom;

  if (J) rep.chi_write = normalized_chi(chi(l, *J, geom, opt.convention, opt.quad), opt.chi_norm);
  if (I) rep.chi_read = normalized_chi(chi(out_mode, *I, geom, opt.convention, opt.quad), opt.chi_norm);
  rep.conversion_factor = rep.chi_read * std::conj(rep.chi_write);
  rep.conversion_coefficient =
      conversion_coefficient(l, I, J, geom, opt.convention, opt.quad, opt.coefficient_form).value;
  params.chi_eff = std::abs(rep.chi_write);
  rep.params = params;

  const StageCouplings couplings{rep.chi_write, rep.chi_read};
  const auto k = full_cycle_kernel(l, I, J, params, opt.kernel_grids, couplings);
  rep.leading_singular_value = leading_singular_value(k);

  const double in_norm = input.norm();
  auto efficiency = [&](const PulseProfile& out) { return in_norm > 0.0 ? out.norm() / in_norm : 0.0; };

  if (opt.engine != Engine::Pde) {
    res.output = apply_kernel(k, input, rep.conversion_factor);
    rep.efficiency = efficiency(res.output);
  }
  if (opt.engine != Engine::Kernel) {
    if (opt.engine == Engine::Both && opt.pde_grids.nt != opt.kernel_grids.nt) {
      throw GridError("engine=both needs equal time grids for the kernel and PDE engines");
    }
    auto written = evolve_write(input, l, J, rep.chi_write, params, opt.pde_grids);
    auto stored_state = apply_storage(std::move(written));
    auto read = evolve_read(stored_state, I, rep.chi_read, params, opt.pde_grids);
    if (read.output_oam != rep.l_out) throw std::logic_error("OAM bookkeeping mismatch");
    if (opt.engine == Engine::Pde) {
      res.output = read.output;
      rep.efficiency = efficiency(res.output);
    } else {
      rep.pde_efficiency = efficiency(read.output);
      rep.engine_disagreement = relative_l2(res.output, read.output);
      rep.flagged = *rep.engine_disagreement > opt.disagreement_threshold;
      res.pde_output = std::move(read.output);
    }
  }
  return res;
}

}  // namespace oamq
