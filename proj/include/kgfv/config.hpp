#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include "kgfv/evolution.hpp"
#include "kgfv/units.hpp"

namespace kgfv {

// INI-style config text:
//   [section]
//   key = value      # trailing comments allowed
// Sections and keys are validated strictly: anything unrecognized anywhere in
// the file is a ConfigError, so typos fail loudly instead of being ignored.
struct ParsedConfig {
  // section -> (key -> raw value string); std::map keeps iteration ordered
  // and the echoed normal form deterministic.
  std::map<std::string, std::map<std::string, std::string>> sections;
};

ParsedConfig parse_config_text(const std::string& text);

enum class Command { Scatter, Sweep, Evolve, Decompose, EprDemo };

const char* to_string(Command command);

struct ScatterParams {
  double E = 0.0;
  double V0 = 0.0;
  double amplitude = 1.0;  // incident amplitude a
};

struct SweepParams {
  double E = 0.0;
  double v0_min = 0.0;
  double v0_max = 0.0;
  int steps = 0;  // number of rows; steps = 1 emits v0_min only
};

struct EvolveParams {
  double x_min = 0.0, x_max = 0.0;
  int n_points = 0;
  std::optional<PotentialProfile> potential;  // nullopt -> free run (V = 0)
  WavepacketSpec packet;
  double t_final = 0.0;
  double dt = 0.0;
  int record_every = 1;
  int snapshot_every = 0;
  bool absorbing_boundary = false;
};

struct DecomposeParams {
  double x_min = 0.0, x_max = 0.0;
  int n_points = 0;
  WavepacketSpec packet;
  std::optional<PotentialProfile> potential;  // nullopt -> V = 0
};

struct EprDemoParams {
  double p1 = 0.75;
  double half_width = 8.0;   // commutator-test domain is [-half_width, half_width]
  int n_points = 512;        // coarsest grid of the refinement ladder
  int refine_levels = 3;     // residual reported at n, 2n, 4n, ...
  std::uint64_t seed = 0;    // 0 -> fixed canonical test functions only
  int random_functions = 0;  // extra seeded random test functions
};

struct ScenarioConfig {
  Command command = Command::Scatter;
  Units units;
  std::variant<ScatterParams, SweepParams, EvolveParams, DecomposeParams,
               EprDemoParams>
      params;
};

// Reads and validates the section named after `command` (plus the optional
// [units] section). Every section present in the file must be a known
// command or [units], and every key in every section must be known — a
// config can hold several commands' sections side by side, but nothing
// unrecognized. Errors are ConfigError with file/line context.
ScenarioConfig load_scenario(const std::filesystem::path& path, Command command);

// Same, from in-memory text (used by tests and by the echo round trip).
ScenarioConfig scenario_from_text(const std::string& text, Command command);

// Normalized config text for the manifest: the [units] section plus the
// command's own section, keys in a fixed canonical order (defaults written
// out), values reformatted through the standard 12-digit formatter. Parsing
// the echo reproduces the scenario exactly.
std::string echo_config(const ScenarioConfig& scenario);

}  // namespace kgfv
