#include "oamq/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "oamq/errors.hpp"

namespace oamq {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v)) {
    throw ConfigError(std::string(key), "expected a finite number, got '" + s + "'");
  }
  return v;
}

int to_int(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError(std::string(key), "expected an integer, got '" + s + "'");
  }
  return v;
}

bool to_bool(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ConfigError(std::string(key), "expected true or false, got '" + s + "'");
}

std::vector<int> to_int_list(std::string_view key, std::string_view text) {
  std::vector<int> out;
  const std::string s = trim(text);
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_int(key, item));
  return out;
}

Drive to_drive(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  if (s == "plane") return std::nullopt;
  try {
    return ModeIndex(to_int(key, s));
  } catch (const IndexOverflowError& e) {
    throw ConfigError(std::string(key), e.what());
  }
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::string drive_text(const Drive& d) { return d ? std::to_string(d->value()) : "plane"; }

struct Field {
  std::function<void(RunConfig&, std::string_view key, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define OAMQ_DOUBLE(name, member)                                                  \
  {name, {[](RunConfig& c, std::string_view k, std::string_view v) { c.member = to_double(k, v); }, \
          [](const RunConfig& c) { return format_double(c.member); }}}
#define OAMQ_INT(name, member)                                                     \
  {name, {[](RunConfig& c, std::string_view k, std::string_view v) { c.member = to_int(k, v); }, \
          [](const RunConfig& c) { return std::to_string(c.member); }}}

const std::map<std::string, Field, std::less<>>& fields() {
  static const std::map<std::string, Field, std::less<>> table = {
      OAMQ_DOUBLE("geometry.w0", w0),
      OAMQ_DOUBLE("geometry.lambda", wavelength),
      OAMQ_DOUBLE("geometry.zs_ratio", zs_ratio),
      OAMQ_DOUBLE("cell.length", cell_length),
      OAMQ_DOUBLE("cell.area", cell_area),
      OAMQ_DOUBLE("thresholds.max_length_ratio", thresholds.max_length_ratio),
      OAMQ_DOUBLE("thresholds.area_tolerance", thresholds.area_tolerance),
      OAMQ_DOUBLE("thresholds.min_paraxial_ratio", thresholds.min_paraxial_ratio),
      {"conventions.area",
       {[](RunConfig& c, std::string_view, std::string_view v) { c.convention = parse_area_convention(trim(v)); },
        [](const RunConfig& c) { return to_string(c.convention); }}},
      {"conventions.chi_norm",
       {[](RunConfig& c, std::string_view, std::string_view v) { c.chi_norm = parse_chi_normalization(trim(v)); },
        [](const RunConfig& c) { return to_string(c.chi_norm); }}},
      {"conventions.coefficient",
       {[](RunConfig& c, std::string_view k, std::string_view v) {
          const std::string s = trim(v);
          if (s == "coupled") c.coefficient_form = CoefficientForm::Coupled;
          else if (s == "stored") c.coefficient_form = CoefficientForm::Stored;
          else throw ConfigError(std::string(k), "expected 'coupled' or 'stored', got '" + s + "'");
        },
        [](const RunConfig& c) {
          return std::string(c.coefficient_form == CoefficientForm::Coupled ? "coupled" : "stored");
        }}},
      OAMQ_DOUBLE("memory.r", memory.r),
      OAMQ_DOUBLE("memory.L_tilde", memory.L_tilde),
      OAMQ_DOUBLE("memory.T_W", memory.T_W),
      OAMQ_DOUBLE("memory.T_R", memory.T_R),
      OAMQ_DOUBLE("memory.epsilon2", memory.epsilon2),
      {"grids.nz",
       {[](RunConfig& c, std::string_view k, std::string_view v) { c.kernel_grids.nz = c.pde_grids.nz = to_int(k, v); },
        [](const RunConfig& c) { return std::to_string(c.kernel_grids.nz); }}},
      {"grids.nt",
       {[](RunConfig& c, std::string_view k, std::string_view v) { c.kernel_grids.nt = c.pde_grids.nt = to_int(k, v); },
        [](const RunConfig& c) { return std::to_string(c.kernel_grids.nt); }}},
      OAMQ_INT("grids.kernel_substeps", kernel_grids.substeps),
      OAMQ_INT("grids.pde_substeps", pde_grids.substeps),
      OAMQ_INT("quadrature.initial_order", quad.initial_order),
      OAMQ_DOUBLE("quadrature.rel_tol", quad.rel_tol),
      OAMQ_INT("quadrature.max_order", quad.max_order),
      {"scan.l",
       {[](RunConfig& c, std::string_view k, std::string_view v) { c.scan_l = to_int_list(k, v); },
        [](const RunConfig& c) { return join(c.scan_l); }}},
      {"scan.m",
       {[](RunConfig& c, std::string_view k, std::string_view v) { c.scan_m = to_int_list(k, v); },
        [](const RunConfig& c) { return join(c.scan_m); }}},
      OAMQ_DOUBLE("scan.zs_min", scan_zs_min),
      OAMQ_DOUBLE("scan.zs_max", scan_zs_max),
      OAMQ_INT("scan.zs_count", scan_zs_count),
      OAMQ_INT("cycle.l", cycle_l),
      {"cycle.J",
       {[](RunConfig& c, std::string_view k, std::string_view v) { c.cycle_J = to_drive(k, v); },
        [](const RunConfig& c) { return drive_text(c.cycle_J); }}},
      {"cycle.I",
       {[](RunConfig& c, std::string_view k, std::string_view v) { c.cycle_I = to_drive(k, v); },
        [](const RunConfig& c) { return drive_text(c.cycle_I); }}},
      {"cycle.engine",
       {[](RunConfig& c, std::string_view, std::string_view v) { c.engine = parse_engine(trim(v)); },
        [](const RunConfig& c) { return to_string(c.engine); }}},
      OAMQ_DOUBLE("cycle.disagreement_threshold", disagreement_threshold),
      {"cycle.pulse",
       {[](RunConfig& c, std::string_view k, std::string_view v) {
          const std::string s = trim(v);
          if (s != "sin2" && s != "gauss" && s != "leading")
            throw ConfigError(std::string(k), "expected 'sin2', 'gauss' or 'leading', got '" + s + "'");
          c.pulse = s;
        },
        [](const RunConfig& c) { return c.pulse; }}},
      {"kernel.kind",
       {[](RunConfig& c, std::string_view k, std::string_view v) {
          const std::string s = trim(v);
          if (s != "K" && s != "G" && s != "G_limit")
            throw ConfigError(std::string(k), "expected 'K', 'G' or 'G_limit', got '" + s + "'");
          c.kernel_kind = s;
        },
        [](const RunConfig& c) { return c.kernel_kind; }}},
      {"kernel.factor_phase",
       {[](RunConfig& c, std::string_view k, std::string_view v) { c.kernel_factor_phase = to_bool(k, v); },
        [](const RunConfig& c) { return std::string(c.kernel_factor_phase ? "true" : "false"); }}},
      OAMQ_DOUBLE("optimize.L_min", opt_L_min),
      OAMQ_DOUBLE("optimize.L_max", opt_L_max),
      OAMQ_INT("optimize.L_count", opt_L_count),
      OAMQ_DOUBLE("optimize.T_min", opt_T_min),
      OAMQ_DOUBLE("optimize.T_max", opt_T_max),
      OAMQ_INT("optimize.T_count", opt_T_count),
      {"output.path",
       {[](RunConfig& c, std::string_view, std::string_view v) { c.output_path = trim(v); },
        [](const RunConfig& c) { return c.output_path; }}},
  };
  return table;
}

#undef OAMQ_DOUBLE
#undef OAMQ_INT

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, _] : fields()) k.push_back(name);
    return k;
  }();
  return keys;
}

void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value) {
  const auto it = fields().find(key);
  if (it == fields().end()) throw ConfigError(std::string(key), "unknown configuration key");
  it->second.set(cfg, key, value);
}

RunConfig parse_config(std::string_view text, RunConfig base) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("", "line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    set_config_value(base, trim(std::string_view(t).substr(0, eq)), std::string_view(t).substr(eq + 1));
  }
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream f(path);
  if (!f) throw ConfigError("--config", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

BeamGeometry RunConfig::geometry() const {
  return BeamGeometry::with_zs_ratio(w0, wavelength, zs_ratio);
}

CellGeometry RunConfig::cell() const {
  const BeamGeometry g = geometry();
  return {cell_length > 0.0 ? cell_length : g.rayleigh_range() / 100.0,
          cell_area > 0.0 ? cell_area : std::numbers::pi * w0 * w0};
}

std::vector<double> RunConfig::zs_grid() const {
  return linspace(scan_zs_min, scan_zs_max, scan_zs_count);
}

std::string RunConfig::canonical() const {
  std::string out;
  for (const auto& [name, field] : fields()) out += name + " = " + field.get(*this) + "\n";
  return out;
}

std::string RunConfig::hash() const {
  RunConfig c = *this;
  c.output_path.clear();
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(c.canonical())));
  return buf;
}

void validate_config(const RunConfig& cfg) {
  if (!(cfg.w0 > 0.0)) throw ConfigError("geometry.w0", "must be positive");
  if (!(cfg.wavelength > 0.0)) throw ConfigError("geometry.lambda", "must be positive");
  if (cfg.cell_length < 0.0) throw ConfigError("cell.length", "must be positive (0 = default)");
  if (cfg.cell_area < 0.0) throw ConfigError("cell.area", "must be positive (0 = default)");
  cfg.memory.validate();
  if (cfg.kernel_grids.nz < 3) throw ConfigError("grids.nz", "must be >= 3");
  if (cfg.kernel_grids.nt < 2) throw ConfigError("grids.nt", "must be >= 2");
  if (cfg.kernel_grids.substeps < 0) throw ConfigError("grids.kernel_substeps", "must be >= 0");
  if (cfg.pde_grids.substeps < 0) throw ConfigError("grids.pde_substeps", "must be >= 0");
  if (cfg.quad.initial_order < 1) throw ConfigError("quadrature.initial_order", "must be >= 1");
  if (cfg.quad.max_order < cfg.quad.initial_order)
    throw ConfigError("quadrature.max_order", "must be >= quadrature.initial_order");
  if (!(cfg.quad.rel_tol > 0.0)) throw ConfigError("quadrature.rel_tol", "must be positive");
  for (int m : cfg.scan_m) {
    if (std::abs(m) > kMaxModeIndex) throw ConfigError("scan.m", "index exceeds the |m| <= 64 cap");
  }
  for (int l : cfg.scan_l) {
    if (std::abs(l) > kMaxModeIndex) throw ConfigError("scan.l", "index exceeds the |m| <= 64 cap");
    for (int m : cfg.scan_m) {
      if (std::abs(l - m) > kMaxModeIndex)
        throw ConfigError("scan.l", "coherence index l - m exceeds the |m| <= 64 cap");
    }
  }
  if (std::abs(cfg.cycle_l) > kMaxModeIndex) throw ConfigError("cycle.l", "index exceeds the |m| <= 64 cap");
  if (!(cfg.disagreement_threshold > 0.0))
    throw ConfigError("cycle.disagreement_threshold", "must be positive");
  if (cfg.scan_zs_count < 1) throw ConfigError("scan.zs_count", "must be >= 1");
  if (cfg.scan_zs_count > 1 && !(cfg.scan_zs_max > cfg.scan_zs_min))
    throw ConfigError("scan.zs_max", "must exceed scan.zs_min");
  if (cfg.opt_L_count < 1) throw ConfigError("optimize.L_count", "must be >= 1");
  if (cfg.opt_T_count < 1) throw ConfigError("optimize.T_count", "must be >= 1");
  if (cfg.opt_L_count > 1 && !(cfg.opt_L_max >= cfg.opt_L_min) )
    throw ConfigError("optimize.L_max", "must be >= optimize.L_min");
  if (cfg.opt_T_count > 1 && !(cfg.opt_T_max >= cfg.opt_T_min))
    throw ConfigError("optimize.T_max", "must be >= optimize.T_min");
  if (!(cfg.opt_L_min > 0.0)) throw ConfigError("optimize.L_min", "must be positive");
  if (!(cfg.opt_T_min > 0.0)) throw ConfigError("optimize.T_min", "must be positive");
}

}  // namespace oamq
