#include "oamq/commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>

#include "oamq/errors.hpp"
#include "oamq/io.hpp"

namespace oamq {

namespace {

Provenance provenance(const RunConfig& cfg, const std::string& command) {
  return {command, to_string(cfg.convention), to_string(cfg.chi_norm),
          cfg.coefficient_form == CoefficientForm::Coupled ? "coupled" : "stored", cfg.hash()};
}

// Opens cfg.output_path or falls back to the provided stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ConfigError("output.path", "cannot write '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

std::ofstream open_side_file(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("output.path", "cannot write '" + path + "'");
  return f;
}

void write_json(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

StageCouplings couplings_for(const RunConfig& cfg) {
  const auto geom = cfg.geometry();
  StageCouplings c;
  const ModeIndex l(cfg.cycle_l);
  const ModeIndex out_mode = l - ModeIndex(drive_shift(cfg.cycle_J)) + ModeIndex(drive_shift(cfg.cycle_I));
  if (cfg.cycle_J) c.write = normalized_chi(chi(l, *cfg.cycle_J, geom, cfg.convention, cfg.quad), cfg.chi_norm);
  if (cfg.cycle_I) c.read = normalized_chi(chi(out_mode, *cfg.cycle_I, geom, cfg.convention, cfg.quad), cfg.chi_norm);
  return c;
}

KernelGrid cycle_kernel(const RunConfig& cfg) {
  const auto c = couplings_for(cfg);
  MemoryParams p = cfg.memory;
  p.chi_eff = std::abs(c.write);
  auto k = full_cycle_kernel(ModeIndex(cfg.cycle_l), cfg.cycle_I, cfg.cycle_J, p, cfg.kernel_grids, c,
                             cfg.kernel_factor_phase);
  k.meta.chi_norm = cfg.chi_norm;
  k.meta.convention = cfg.convention;
  return k;
}

}  // namespace

PulseProfile make_input_pulse(const RunConfig& cfg, const KernelGrid* kernel) {
  const auto t = UniformGrid::span(0.0, cfg.memory.T_W, cfg.kernel_grids.nt);
  const double T = cfg.memory.T_W;
  if (cfg.pulse == "sin2") {
    return PulseProfile::sample(t, [T](double x) {
      const double s = std::sin(std::numbers::pi * x / T);
      return std::complex<double>(s * s, 0.0);
    });
  }
  if (cfg.pulse == "gauss") {
    return PulseProfile::sample(t, [T](double x) {
      const double u = (x - 0.5 * T) / (0.125 * T);
      return std::complex<double>(std::exp(-0.5 * u * u), 0.0);
    });
  }
  KernelGrid local;
  if (!kernel) {
    local = cycle_kernel(cfg);
    kernel = &local;
  }
  const auto spec = discretize_and_decompose(*kernel);
  PulseProfile p;
  p.t = t;
  p.samples.resize(t.count);
  for (int i = 0; i < t.count; ++i) p.samples[i] = spec.right(i, 0);
  return p;
}

int cmd_scan_chi(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  validate_config(cfg);
  std::vector<ModeIndex> ls;
  for (int l : cfg.scan_l) ls.emplace_back(l);
  auto geom = cfg.geometry();
  geom.validate();
  std::vector<OverlapRecord> scan;
  for (int m : cfg.scan_m) {
    auto part = scan_chi(ls, ModeIndex(m), cfg.zs_grid(), geom, cfg.convention, cfg.quad);
    scan.insert(scan.end(), part.begin(), part.end());
  }
  Sink sink(cfg.output_path, out);
  write_csv_preamble(sink.get(), provenance(cfg, "scan-chi"));
  write_chi_csv(sink.get(), scan, cfg.chi_norm);
  log << "scan-chi: " << ls.size() * cfg.scan_m.size() << " curves x " << cfg.scan_zs_count << " points\n";
  return kExitOk;
}

int cmd_kernel(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  validate_config(cfg);
  if (cfg.output_path.empty()) throw ConfigError("output.path", "kernel output needs --out");
  KernelGrid k;
  if (cfg.kernel_kind == "K") {
    k = cycle_kernel(cfg);
  } else {
    const auto c = couplings_for(cfg);
    const auto z = UniformGrid::span(0.0, cfg.memory.L_tilde, cfg.kernel_grids.nz);
    const auto t = UniformGrid::span(0.0, cfg.memory.T_W, cfg.kernel_grids.nt);
    k.axis1 = z;
    k.axis2 = t;
    k.axis1_name = "z";
    k.axis2_name = "t";
    k.weights1 = trapezoid_weights(z.count, z.step);
    k.weights2 = trapezoid_weights(t.count, t.step);
    k.meta.kind = cfg.kernel_kind;
    k.meta.params = cfg.memory;
    k.meta.params.chi_eff = std::abs(c.write);
    k.meta.l = cfg.cycle_l;
    k.meta.J = cfg.cycle_J;
    k.meta.chi_write = c.write;
    k.meta.chi_norm = cfg.chi_norm;
    k.meta.convention = cfg.convention;
    k.meta.substeps = cfg.kernel_grids.substeps ? cfg.kernel_grids.substeps : auto_substeps(t, {});
    k.meta.z_rule = "trapezoid";
    k.values = cfg.kernel_kind == "G"
                   ? g_kernel_table(z, t, cfg.memory.r, std::abs(c.write), cfg.kernel_grids.substeps)
                   : g_kernel_raman_limit_table(z, t, cfg.memory.r, cfg.kernel_grids.substeps);
  }
  write_kernel_binary(cfg.output_path, k);
  Json side = kernel_sidecar(k, cfg.output_path.substr(cfg.output_path.find_last_of('/') + 1));
  side["provenance"] = provenance_json(provenance(cfg, "kernel"));
  {
    auto f = open_side_file(cfg.output_path + ".json");
    write_json(f, side);
  }
  if (k.values.size() <= 4096) {
    auto f = open_side_file(cfg.output_path + ".csv");
    write_csv_preamble(f, provenance(cfg, "kernel"));
    write_kernel_csv(f, k);
  }
  if (k.meta.kind == "K") {
    auto f = open_side_file(cfg.output_path + ".spectrum.csv");
    write_csv_preamble(f, provenance(cfg, "kernel"));
    write_spectrum_csv(f, discretize_and_decompose(k));
  }
  log << "kernel " << k.meta.kind << ": " << k.values.rows() << "x" << k.values.cols() << " written to "
      << cfg.output_path << "\n";
  (void)out;
  return kExitOk;
}

int cmd_cycle(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  validate_config(cfg);
  CycleOptions opt;
  opt.engine = cfg.engine;
  opt.convention = cfg.convention;
  opt.chi_norm = cfg.chi_norm;
  opt.coefficient_form = cfg.coefficient_form;
  opt.quad = cfg.quad;
  opt.kernel_grids = cfg.kernel_grids;
  opt.pde_grids = cfg.pde_grids;
  opt.thresholds = cfg.thresholds;
  opt.disagreement_threshold = cfg.disagreement_threshold;
  const auto geom = cfg.geometry();
  const auto cell = cfg.cell();
  const auto validity = check_paraxial_constraints(geom, cell, cfg.thresholds);
  if (!validity.pass()) {
    for (const auto* c : {&validity.length, &validity.area, &validity.paraxial}) {
      if (!c->pass) {
        throw GeometryError("geometry check failed: " + c->name + " condition " + c->requirement +
                            " (value " + format_double(c->value) + ", limit " + format_double(c->threshold) + ")");
      }
    }
  }
  const auto input = make_input_pulse(cfg);
  const auto res = run_cycle(input, ModeIndex(cfg.cycle_l), cfg.cycle_J, cfg.cycle_I, geom, cell, cfg.memory, opt);

  Json j;
  j["provenance"] = provenance_json(provenance(cfg, "cycle"));
  j["report"] = to_json(res.report);
  j["validity"] = to_json(validity);
  j["input_norm"] = input.norm();
  j["output_norm"] = res.output.norm();
  Sink sink(cfg.output_path, out);
  write_json(sink.get(), j);
  log << "cycle: l_in=" << res.report.l_in << " l_out=" << res.report.l_out
      << " efficiency=" << format_double(res.report.efficiency) << "\n";
  if (res.report.flagged) {
    log << "engine disagreement " << format_double(*res.report.engine_disagreement) << " exceeds "
        << format_double(opt.disagreement_threshold) << "\n";
    return kExitDisagreement;
  }
  return kExitOk;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  validate_config(cfg);
  const auto geom = cfg.geometry();
  geom.validate();
  const auto c = couplings_for(cfg);
  MemoryParams p = cfg.memory;
  p.chi_eff = std::abs(c.write);
  const auto input = make_input_pulse(cfg);
  auto written = evolve_write(input, ModeIndex(cfg.cycle_l), cfg.cycle_J, c.write, p, cfg.pde_grids, true);
  const double residual = written.continuity_residual;
  auto stored = apply_storage(std::move(written));
  if (!cfg.output_path.empty()) {
    auto f = open_side_file(cfg.output_path + ".state.csv");
    write_csv_preamble(f, provenance(cfg, "simulate"));
    write_state_csv(f, stored);
  }
  const auto read = evolve_read(stored, cfg.cycle_I, c.read, p, cfg.pde_grids);
  Sink sink(cfg.output_path, out);
  write_csv_preamble(sink.get(), provenance(cfg, "simulate"));
  write_pulse_csv(sink.get(), read.output);
  log << "simulate: output OAM " << read.output_oam << ", efficiency "
      << format_double(read.output.norm() / input.norm()) << ", continuity residual "
      << format_double(residual) << "\n";
  return kExitOk;
}

int cmd_check_geometry(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  (void)log;
  if (!(cfg.w0 > 0.0)) throw ConfigError("geometry.w0", "must be positive");
  if (!(cfg.wavelength > 0.0)) throw ConfigError("geometry.lambda", "must be positive");
  const auto report = check_paraxial_constraints(cfg.geometry(), cfg.cell(), cfg.thresholds);
  Sink sink(cfg.output_path, out);
  auto& o = sink.get();
  o << "# oamq check-geometry config_hash=" << cfg.hash() << "\n";
  for (const auto* c : {&report.length, &report.area, &report.paraxial}) {
    o << (c->pass ? "PASS " : "FAIL ") << c->name << ": " << c->requirement
      << " value=" << format_double(c->value) << " limit=" << format_double(c->threshold) << "\n";
  }
  if (report.pass()) {
    o << "PASS x3\n";
  } else {
    o << "FAIL (" << report.passed_count() << "/3 passed)\n";
  }
  return kExitOk;
}

int cmd_optimize(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  validate_config(cfg);
  OptimizeSearch search{linspace(cfg.opt_L_min, cfg.opt_L_max, cfg.opt_L_count),
                        linspace(cfg.opt_T_min, cfg.opt_T_max, cfg.opt_T_count)};
  const auto res = optimize_parameters(search, cfg.memory, cfg.kernel_grids);
  Json j;
  j["provenance"] = provenance_json(provenance(cfg, "optimize"));
  j["best"] = to_json(res.best);
  j["leading_singular_value"] = res.best_singular_value;
  j["L_values"] = search.L_values;
  j["T_values"] = search.T_values;
  Json table = Json::array();
  for (Eigen::Index i = 0; i < res.table.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < res.table.cols(); ++k) row.push_back(res.table(i, k));
    table.push_back(row);
  }
  j["table"] = table;
  Sink sink(cfg.output_path, out);
  write_json(sink.get(), j);
  log << "optimize: L_tilde=" << format_double(res.best.L_tilde) << " T_W=" << format_double(res.best.T_W)
      << " sigma=" << format_double(res.best_singular_value) << "\n";
  return kExitOk;
}

int run_command(const std::string& name, const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  try {
    if (name == "scan-chi") return cmd_scan_chi(cfg, out, log);
    if (name == "kernel") return cmd_kernel(cfg, out, log);
    if (name == "cycle") return cmd_cycle(cfg, out, log);
    if (name == "simulate") return cmd_simulate(cfg, out, log);
    if (name == "check-geometry") return cmd_check_geometry(cfg, out, log);
    if (name == "optimize") return cmd_optimize(cfg, out, log);
    log << "error: unknown command '" << name << "'\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const GeometryError& e) {
    log << "geometry error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IndexOverflowError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const GridError& e) {
    log << "grid error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const AccuracyError& e) {
    log << "convergence failure: " << e.what() << " (last estimates " << format_double(e.previous()) << ", "
        << format_double(e.last()) << ")\n";
    return kExitConvergence;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace oamq
