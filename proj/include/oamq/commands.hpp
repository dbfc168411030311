#pragma once

#include <iosfwd>
#include <string>

#include "oamq/config.hpp"

namespace oamq {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitConvergence = 3,
  kExitDisagreement = 4,
};

/// Each command writes its main output to cfg.output_path, or to `out` when
/// the path is empty, and human-readable notes to `log`. Errors propagate as
/// exceptions; exit_code_for maps them.
int cmd_scan_chi(const RunConfig& cfg, std::ostream& out, std::ostream& log);
int cmd_kernel(const RunConfig& cfg, std::ostream& out, std::ostream& log);
int cmd_cycle(const RunConfig& cfg, std::ostream& out, std::ostream& log);
int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& log);
int cmd_check_geometry(const RunConfig& cfg, std::ostream& out, std::ostream& log);
int cmd_optimize(const RunConfig& cfg, std::ostream& out, std::ostream& log);

/// Dispatches by command name ("scan-chi", "kernel", ...) and converts
/// exceptions into exit codes, printing the message to `log`.
int run_command(const std::string& name, const RunConfig& cfg, std::ostream& out,
                std::ostream& log);

/// Input pulse named by cfg.pulse, sampled on the write grid.
PulseProfile make_input_pulse(const RunConfig& cfg, const KernelGrid* kernel = nullptr);

}  // namespace oamq
