#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "oamq/commands.hpp"
#include "oamq/errors.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::string out;
  std::string convention;
  std::string chi_norm;
  std::string engine;
  std::vector<std::string> overrides;
  std::optional<long long> seed;  // accepted for interface stability; nothing is random
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "configuration file (key = value)");
  cmd->add_option("--out", f.out, "output path (stdout when omitted)");
  cmd->add_option("--convention", f.convention, "mode-area convention")->check(CLI::IsMember({"quarter", "half"}));
  cmd->add_option("--chi-norm", f.chi_norm, "overlap normalization")->check(CLI::IsMember({"appendix", "maintext"}));
  cmd->add_option("--engine", f.engine, "cycle engine")->check(CLI::IsMember({"kernel", "pde", "both"}));
  cmd->add_option("--set", f.overrides, "override a configuration key, key=value (repeatable)");
  cmd->add_option("--seed", f.seed, "reserved; all computation is deterministic");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"oamq: OAM Raman quantum memory simulator"};
  app.require_subcommand(1);
  CommonFlags flags;
  const char* names[][2] = {
      {"scan-chi", "overlap coefficients versus z_S / z_R as CSV"},
      {"kernel", "write a kernel matrix (binary + JSON sidecar)"},
      {"cycle", "run a write-store-read cycle and report as JSON"},
      {"simulate", "integrate the coupled equations and write pulse and state CSV"},
      {"check-geometry", "report the diffraction-free cell conditions"},
      {"optimize", "grid-search cell length and pulse duration"},
  };
  for (const auto& n : names) add_common(app.add_subcommand(n[0], n[1]), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : oamq::kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  oamq::RunConfig cfg;
  try {
    if (!flags.config.empty()) cfg = oamq::load_config(flags.config);
    for (const auto& kv : flags.overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw oamq::ConfigError(kv, "--set expects key=value");
      oamq::set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!flags.out.empty()) cfg.output_path = flags.out;
    if (!flags.convention.empty()) oamq::set_config_value(cfg, "conventions.area", flags.convention);
    if (!flags.chi_norm.empty()) oamq::set_config_value(cfg, "conventions.chi_norm", flags.chi_norm);
    if (!flags.engine.empty()) oamq::set_config_value(cfg, "cycle.engine", flags.engine);
  } catch (const oamq::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return oamq::kExitConfig;
  }
  return oamq::run_command(command, cfg, std::cout, std::cerr);
}
