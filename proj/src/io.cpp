#include "oamq/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <ostream>

#include "oamq/config.hpp"
#include "oamq/errors.hpp"

namespace oamq {

void write_csv_preamble(std::ostream& out, const Provenance& p) {
  out << "# oamq " << p.command << "\n";
  out << "# convention=" << p.convention << " chi_norm=" << p.chi_norm
      << " coefficient=" << p.coefficient_form << "\n";
  out << "# config_hash=" << p.config_hash << "\n";
}

Json provenance_json(const Provenance& p) {
  Json j;
  j["command"] = p.command;
  j["convention"] = p.convention;
  j["chi_norm"] = p.chi_norm;
  j["coefficient_form"] = p.coefficient_form;
  j["config_hash"] = p.config_hash;
  return j;
}

void write_chi_csv(std::ostream& out, const std::vector<OverlapRecord>& scan,
                   ChiNormalization argmax_norm) {
  out << kChiCsvHeader << "\n";
  const auto argmax = curve_argmax(scan, argmax_norm);
  std::size_t curve = 0, pos = 0;
  for (std::size_t k = 0; k < scan.size(); ++k) {
    if (k > 0 && (scan[k].l != scan[k - 1].l || scan[k].m != scan[k - 1].m)) {
      ++curve;
      pos = 0;
    }
    const auto& r = scan[k];
    out << r.l.value() << ',' << r.m.value() << ',' << format_double(r.zs_ratio) << ','
        << format_double(r.chi.real()) << ',' << format_double(r.chi.imag()) << ','
        << format_double(std::abs(r.chi_tilde)) << ',' << format_double(std::abs(r.chi_over_s))
        << ',' << to_string(r.convention) << ',' << r.quad_order << ','
        << (argmax[curve] == pos ? 1 : 0) << "\n";
    ++pos;
  }
}

void write_pulse_csv(std::ostream& out, const PulseProfile& p) {
  out << "t,re_a,im_a\n";
  for (int i = 0; i < static_cast<int>(p.samples.size()); ++i) {
    out << format_double(p.t.at(i)) << ',' << format_double(p.samples[i].real()) << ','
        << format_double(p.samples[i].imag()) << "\n";
  }
}

void write_state_csv(std::ostream& out, const FieldState& s) {
  out << "z,re_b,im_b,re_c,im_c\n";
  for (int i = 0; i < s.z.count; ++i) {
    out << format_double(s.z.at(i)) << ',' << format_double(s.b[i].real()) << ','
        << format_double(s.b[i].imag()) << ',' << format_double(s.c[i].real()) << ','
        << format_double(s.c[i].imag()) << "\n";
  }
}

void write_spectrum_csv(std::ostream& out, const SingularSpectrum& s) {
  out << "index,singular_value\n";
  for (std::size_t i = 0; i < s.values.size(); ++i) out << i << ',' << format_double(s.values[i]) << "\n";
}

void write_kernel_csv(std::ostream& out, const KernelGrid& k) {
  out << k.axis1_name << ',' << k.axis2_name << ",re,im\n";
  for (int i = 0; i < k.axis1.count; ++i) {
    for (int j = 0; j < k.axis2.count; ++j) {
      const auto v = k.values(i, j);
      out << format_double(k.axis1.at(i)) << ',' << format_double(k.axis2.at(j)) << ','
          << format_double(v.real()) << ',' << format_double(v.imag()) << "\n";
    }
  }
}

namespace {

void put_le(std::ostream& out, double v) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

double get_le(std::istream& in) {
  unsigned char bytes[8];
  in.read(reinterpret_cast<char*>(bytes), 8);
  if (!in) throw GridError("kernel binary is truncated");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= std::uint64_t(bytes[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

Json grid_json(const UniformGrid& g, const std::string& name) {
  Json j;
  j["name"] = name;
  j["start"] = g.start;
  j["step"] = g.step;
  j["count"] = g.count;
  return j;
}

UniformGrid grid_from_json(const Json& j) {
  return {j.at("start").get<double>(), j.at("step").get<double>(), j.at("count").get<int>()};
}

}  // namespace

void write_kernel_binary(const std::string& path, const KernelGrid& k) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("--out", "cannot write '" + path + "'");
  for (int i = 0; i < k.values.rows(); ++i) {
    for (int j = 0; j < k.values.cols(); ++j) {
      put_le(out, k.values(i, j).real());
      put_le(out, k.values(i, j).imag());
    }
  }
}

Json complex_json(std::complex<double> v) { return Json::array({v.real(), v.imag()}); }

Json to_json(const MemoryParams& p) {
  Json j;
  j["r"] = p.r;
  j["chi_eff"] = p.chi_eff;
  j["L_tilde"] = p.L_tilde;
  j["T_W"] = p.T_W;
  j["T_R"] = p.T_R;
  j["epsilon2"] = p.epsilon2;
  return j;
}

Json kernel_sidecar(const KernelGrid& k, const std::string& binary_name) {
  Json j;
  j["format"] = "complex128-le-rowmajor";
  j["binary"] = binary_name;
  j["rows"] = k.values.rows();
  j["cols"] = k.values.cols();
  j["axis1"] = grid_json(k.axis1, k.axis1_name);
  j["axis2"] = grid_json(k.axis2, k.axis2_name);
  j["weights1"] = k.weights1;
  j["weights2"] = k.weights2;
  Json m;
  m["kind"] = k.meta.kind;
  m["params"] = to_json(k.meta.params);
  m["l"] = k.meta.l;
  m["I"] = drive_label(k.meta.I);
  m["J"] = drive_label(k.meta.J);
  m["chi_write"] = complex_json(k.meta.chi_write);
  m["chi_read"] = complex_json(k.meta.chi_read);
  m["chi_norm"] = to_string(k.meta.chi_norm);
  m["convention"] = to_string(k.meta.convention);
  m["phase_factored"] = k.meta.phase_factored;
  m["phase_rate"] = k.meta.phase_rate;
  m["z_rule"] = k.meta.z_rule;
  m["substeps"] = k.meta.substeps;
  j["meta"] = m;
  return j;
}

KernelGrid read_kernel(const std::string& binary_path, const std::string& sidecar_path) {
  std::ifstream side(sidecar_path);
  if (!side) throw ConfigError("", "cannot open '" + sidecar_path + "'");
  const Json j = Json::parse(side);
  KernelGrid k;
  k.axis1 = grid_from_json(j.at("axis1"));
  k.axis2 = grid_from_json(j.at("axis2"));
  k.axis1_name = j.at("axis1").at("name").get<std::string>();
  k.axis2_name = j.at("axis2").at("name").get<std::string>();
  k.weights1 = j.at("weights1").get<std::vector<double>>();
  k.weights2 = j.at("weights2").get<std::vector<double>>();
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& m = j.at("meta");
  k.meta.kind = m.at("kind").get<std::string>();
  const auto& p = m.at("params");
  k.meta.params = {p.at("r").get<double>(),   p.at("chi_eff").get<double>(), p.at("L_tilde").get<double>(),
                   p.at("T_W").get<double>(), p.at("T_R").get<double>(),     p.at("epsilon2").get<double>()};
  k.meta.l = m.at("l").get<int>();
  k.meta.phase_factored = m.at("phase_factored").get<bool>();
  k.meta.phase_rate = m.at("phase_rate").get<double>();
  k.meta.z_rule = m.at("z_rule").get<std::string>();
  k.meta.substeps = m.at("substeps").get<int>();
  auto drive = [](const Json& v) -> Drive {
    const auto s = v.get<std::string>();
    if (s == "plane") return std::nullopt;
    return ModeIndex(std::stoi(s));
  };
  k.meta.I = drive(m.at("I"));
  k.meta.J = drive(m.at("J"));
  const auto cw = m.at("chi_write"), cr = m.at("chi_read");
  k.meta.chi_write = {cw[0].get<double>(), cw[1].get<double>()};
  k.meta.chi_read = {cr[0].get<double>(), cr[1].get<double>()};
  k.meta.chi_norm = parse_chi_normalization(m.at("chi_norm").get<std::string>());
  k.meta.convention = parse_area_convention(m.at("convention").get<std::string>());

  std::ifstream in(binary_path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot open '" + binary_path + "'");
  k.values.resize(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index jj = 0; jj < cols; ++jj) {
      const double re = get_le(in);
      const double im = get_le(in);
      k.values(i, jj) = {re, im};
    }
  }
  return k;
}

Json to_json(const ValidityReport& r) {
  Json j;
  for (const auto* c : {&r.length, &r.area, &r.paraxial}) {
    Json e;
    e["requirement"] = c->requirement;
    e["value"] = c->value;
    e["threshold"] = c->threshold;
    e["pass"] = c->pass;
    j[c->name] = e;
  }
  j["pass"] = r.pass();
  return j;
}

Json to_json(const CycleReport& r) {
  Json j;
  j["l_in"] = r.l_in;
  j["J"] = drive_label(r.J);
  j["I"] = drive_label(r.I);
  j["l_out"] = r.l_out;
  j["engine"] = r.engine;
  j["efficiency"] = r.efficiency;
  j["pde_efficiency"] = r.pde_efficiency ? Json(*r.pde_efficiency) : Json(nullptr);
  j["chi_write"] = complex_json(r.chi_write);
  j["chi_read"] = complex_json(r.chi_read);
  j["conversion_factor"] = complex_json(r.conversion_factor);
  j["abs_conversion_factor"] = std::abs(r.conversion_factor);
  j["conversion_coefficient"] = complex_json(r.conversion_coefficient);
  j["abs_conversion_coefficient"] = std::abs(r.conversion_coefficient);
  j["leading_singular_value"] = r.leading_singular_value;
  // sigma^2 |conversion_factor|^2: efficiency bound of the best input pulse
  j["leading_efficiency_bound"] =
      r.leading_singular_value * r.leading_singular_value * std::norm(r.conversion_factor);
  j["engine_disagreement"] = r.engine_disagreement ? Json(*r.engine_disagreement) : Json(nullptr);
  j["flagged"] = r.flagged;
  j["convention"] = to_string(r.convention);
  j["chi_norm"] = to_string(r.chi_norm);
  j["coefficient_form"] = r.coefficient_form == CoefficientForm::Coupled ? "coupled" : "stored";
  j["params"] = to_json(r.params);
  Json g;
  g["kernel_nz"] = r.kernel_grids.nz;
  g["kernel_nt"] = r.kernel_grids.nt;
  g["kernel_substeps"] = r.kernel_grids.substeps;
  g["pde_nz"] = r.pde_grids.nz;
  g["pde_nt"] = r.pde_grids.nt;
  g["pde_substeps"] = r.pde_grids.substeps;
  j["grids"] = g;
  Json geo;
  geo["w0"] = r.geometry.w0;
  geo["lambda"] = r.geometry.wavelength;
  geo["zs_ratio"] = r.geometry.zs_ratio();
  j["geometry"] = geo;
  return j;
}

}  // namespace oamq
