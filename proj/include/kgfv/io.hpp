#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "kgfv/evolution.hpp"
#include "kgfv/fv.hpp"
#include "kgfv/scattering.hpp"

namespace kgfv {

// All numeric output goes through this one formatter: %.12g in the C locale,
// so results carry 12 significant digits and runs are byte-reproducible.
std::string format_number(double value);

// JSON string escaping (quotes, backslashes, control chars, newlines).
std::string json_escape(std::string_view s);

// FNV-1a 64-bit content digest, rendered as 16 lowercase hex digits.
std::uint64_t fnv1a64(std::string_view data);
std::string fnv1a64_hex(std::string_view data);

// Writes content to path atomically: temp file in the same directory, flush,
// rename. Creates parent directories as needed.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content);

// --- delimited-text builders -------------------------------------------------

// Time-series export, one row per recorded time:
//   t,Q_total,Q_left,Q_right,max_abs_psi
std::string timeseries_csv(const SimulationRecord& record);

// Field snapshot, one row per grid point:
//   x,re_phi,im_phi,re_chi,im_chi,rho
std::string snapshot_csv(const FVField& field);

// Reflectivity sweep, one row per V0 (failed entries keep the row with an
// error note in place of numbers):
//   V0,p_prime_re,p_prime_im,R,T,regime,error
std::string sweep_csv(const std::vector<SweepEntry>& entries);

// Single-step scattering record as JSON with the full density/flux breakdown:
// keys E,V0,p,p_prime_re,p_prime_im,b_over_a_re,b_over_a_im,bprime_over_a_re,
// bprime_over_a_im,R,T,regime,rho_i,j_i,rho_r,j_r,rho_t,j_t,flux_residual.
std::string scatter_record_json(const ScatteringSolution& solution,
                                const StepDensities& densities);

// --- run manifest --------------------------------------------------------------

// Summary of one CLI run: what ran, against which config, whether the
// internal consistency checks passed, and content digests of every output
// file. duration_ms is wall clock and is the only field allowed to differ
// between reruns of the same config.
struct RunManifest {
  std::string command;
  std::string version;
  std::string config_echo;  // normalized config text, reparseable
  std::int64_t duration_ms = 0;
  struct Check {
    std::string name;
    bool pass = false;
  };
  std::vector<Check> checks;
  struct Output {
    std::string file;       // path relative to the output directory
    std::string fnv1a64;    // hex digest of the file content
  };
  std::vector<Output> outputs;
};

std::string manifest_json(const RunManifest& manifest);

}  // namespace kgfv
