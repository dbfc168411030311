#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "oamq/dynamics.hpp"
#include "oamq/kernels.hpp"
#include "oamq/memory_cycle.hpp"
#include "oamq/overlap.hpp"

namespace oamq {

using Json = nlohmann::ordered_json;

/// Lines written at the top of every output file, after the comment marker.
struct Provenance {
  std::string command;
  std::string convention;
  std::string chi_norm;
  std::string coefficient_form;
  std::string config_hash;
};

void write_csv_preamble(std::ostream& out, const Provenance& p);
Json provenance_json(const Provenance& p);

inline const char* kChiCsvHeader =
    "l,m,zs_ratio,re_chi,im_chi,abs_chi_tilde,abs_chi_over_s,convention,quad_order,curve_argmax";

/// One row per record; curve_argmax is 1 on the row holding the largest
/// |normalized chi| of its (l, m) curve.
void write_chi_csv(std::ostream& out, const std::vector<OverlapRecord>& scan,
                   ChiNormalization argmax_norm);

void write_pulse_csv(std::ostream& out, const PulseProfile& p);
void write_state_csv(std::ostream& out, const FieldState& s);
void write_spectrum_csv(std::ostream& out, const SingularSpectrum& s);
void write_kernel_csv(std::ostream& out, const KernelGrid& k);

/// Row-major (re, im) pairs as little-endian IEEE-754 doubles.
void write_kernel_binary(const std::string& path, const KernelGrid& k);
Json kernel_sidecar(const KernelGrid& k, const std::string& binary_name);
/// Reads a binary written by write_kernel_binary using its sidecar.
KernelGrid read_kernel(const std::string& binary_path, const std::string& sidecar_path);

Json to_json(const MemoryParams& p);
Json to_json(const CycleReport& r);
Json to_json(const ValidityReport& r);
Json complex_json(std::complex<double> v);

}  // namespace oamq
