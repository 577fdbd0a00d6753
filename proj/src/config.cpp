#include "kgfv/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "kgfv/errors.hpp"
#include "kgfv/io.hpp"

namespace kgfv {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(int line, const std::string& message) {
  throw ConfigError("config line " + std::to_string(line) + ": " + message);
}

}  // namespace

ParsedConfig parse_config_text(const std::string& text) {
  ParsedConfig config;
  std::istringstream stream(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    // Strip trailing comment, then whitespace.
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        fail(line_no, "malformed section header '" + line + "'");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) fail(line_no, "empty section name");
      if (config.sections.count(section) != 0) {
        fail(line_no, "duplicate section [" + section + "]");
      }
      config.sections[section];  // create
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail(line_no, "expected 'key = value', got '" + line + "'");
    }
    if (section.empty()) {
      fail(line_no, "key outside of any [section]");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(line_no, "empty key");
    if (value.empty()) fail(line_no, "empty value for key '" + key + "'");
    auto& kv = config.sections[section];
    if (kv.count(key) != 0) {
      fail(line_no, "duplicate key '" + key + "' in [" + section + "]");
    }
    kv[key] = value;
  }
  return config;
}

const char* to_string(Command command) {
  switch (command) {
    case Command::Scatter: return "scatter";
    case Command::Sweep: return "sweep";
    case Command::Evolve: return "evolve";
    case Command::Decompose: return "decompose";
    case Command::EprDemo: return "epr-demo";
  }
  return "?";
}

namespace {

double parse_double(const std::string& section, const std::string& key,
                    const std::string& value) {
  // std::from_chars is the strict, locale-independent route.
  double out = 0.0;
  const char* first = value.data();
  const char* last = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError("[" + section + "] " + key + ": '" + value +
                      "' is not a number");
  }
  return out;
}

long long parse_int(const std::string& section, const std::string& key,
                    const std::string& value) {
  long long out = 0;
  const char* first = value.data();
  const char* last = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError("[" + section + "] " + key + ": '" + value +
                      "' is not an integer");
  }
  return out;
}

bool parse_bool(const std::string& section, const std::string& key,
                const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw ConfigError("[" + section + "] " + key + ": expected true or false, got '" +
                    value + "'");
}

// Accessor over one section's key/value map with required/optional getters.
class Section {
 public:
  Section(std::string name, const std::map<std::string, std::string>& kv)
      : name_(std::move(name)), kv_(kv) {}

  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  const std::string& raw(const std::string& key) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) {
      throw ConfigError("[" + name_ + "] missing required key '" + key + "'");
    }
    return it->second;
  }

  double number(const std::string& key) const {
    return parse_double(name_, key, raw(key));
  }
  double number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }
  long long integer(const std::string& key) const {
    return parse_int(name_, key, raw(key));
  }
  long long integer_or(const std::string& key, long long fallback) const {
    return has(key) ? integer(key) : fallback;
  }
  bool boolean_or(const std::string& key, bool fallback) const {
    return has(key) ? parse_bool(name_, key, raw(key)) : fallback;
  }

  const std::string& name() const { return name_; }

 private:
  std::string name_;
  const std::map<std::string, std::string>& kv_;
};

const std::map<std::string, std::set<std::string>>& known_sections() {
  static const std::map<std::string, std::set<std::string>> table = {
      {"units", {"hbar", "c", "m"}},
      {"scatter", {"E", "V0", "amplitude"}},
      {"sweep", {"E", "v0_min", "v0_max", "steps"}},
      {"evolve",
       {"x_min", "x_max", "n_points", "potential", "v0", "center", "width",
        "x0", "sigma", "p0", "amplitude", "t_final", "dt", "record_every",
        "snapshot_every", "absorbing"}},
      {"decompose",
       {"x_min", "x_max", "n_points", "potential", "v0", "center", "width",
        "x0", "sigma", "p0", "amplitude"}},
      {"epr-demo",
       {"p1", "half_width", "n_points", "refine_levels", "seed",
        "random_functions"}},
  };
  return table;
}

// Every section in the file must be known, and every key in every section
// must belong to that section — including sections for commands other than
// the one being run. Typos fail loudly no matter where they sit.
void validate_all_sections(const ParsedConfig& config) {
  for (const auto& [section, kv] : config.sections) {
    const auto it = known_sections().find(section);
    if (it == known_sections().end()) {
      throw ConfigError("unknown section [" + section + "]");
    }
    for (const auto& [key, value] : kv) {
      if (it->second.count(key) == 0) {
        throw ConfigError("unknown key '" + key + "' in [" + section + "]");
      }
    }
  }
}

int checked_count(const Section& s, const std::string& key, long long value,
                  long long minimum) {
  if (value < minimum) {
    throw ConfigError("[" + s.name() + "] " + key + " must be >= " +
                      std::to_string(minimum));
  }
  if (value > std::numeric_limits<int>::max()) {
    throw ConfigError("[" + s.name() + "] " + key + " is too large");
  }
  return static_cast<int>(value);
}

Units read_units(const ParsedConfig& config) {
  Units units;
  const auto it = config.sections.find("units");
  if (it == config.sections.end()) return units;
  const Section s("units", it->second);
  units.hbar = s.number_or("hbar", 1.0);
  units.c = s.number_or("c", 1.0);
  units.m = s.number_or("m", 1.0);
  if (!(units.hbar > 0.0 && units.c > 0.0 && units.m > 0.0)) {
    throw ConfigError("[units] hbar, c, m must all be > 0");
  }
  return units;
}

std::optional<PotentialProfile> read_potential(const Section& s) {
  const std::string kind = s.has("potential") ? s.raw("potential") : "none";
  if (kind == "none") {
    for (const char* key : {"v0", "center", "width"}) {
      if (s.has(key)) {
        throw ConfigError("[" + s.name() + "] '" + key +
                          "' requires potential = sharp_step or smooth_step");
      }
    }
    return std::nullopt;
  }
  PotentialProfile profile;
  profile.V0 = s.number("v0");
  profile.center = s.number("center");
  if (kind == "sharp_step") {
    if (s.has("width")) {
      throw ConfigError("[" + s.name() +
                        "] width is only meaningful for smooth_step");
    }
    profile.kind = PotentialKind::SharpStep;
  } else if (kind == "smooth_step") {
    profile.kind = PotentialKind::SmoothStep;
    profile.width = s.number("width");
    if (!(profile.width > 0.0)) {
      throw ConfigError("[" + s.name() + "] width must be > 0");
    }
  } else {
    throw ConfigError("[" + s.name() + "] potential must be none, sharp_step "
                      "or smooth_step, got '" + kind + "'");
  }
  return profile;
}

WavepacketSpec read_packet(const Section& s) {
  WavepacketSpec packet;
  packet.x0 = s.number("x0");
  packet.sigma = s.number("sigma");
  packet.p0 = s.number("p0");
  packet.amplitude = s.number_or("amplitude", 1.0);
  if (!(packet.sigma > 0.0)) {
    throw ConfigError("[" + s.name() + "] sigma must be > 0");
  }
  if (!(packet.amplitude > 0.0)) {
    throw ConfigError("[" + s.name() + "] amplitude must be > 0");
  }
  return packet;
}

void read_grid_extent(const Section& s, double& x_min, double& x_max,
                      int& n_points) {
  x_min = s.number("x_min");
  x_max = s.number("x_max");
  n_points = checked_count(s, "n_points", s.integer("n_points"), 2);
  if (!(x_min < x_max)) {
    throw ConfigError("[" + s.name() + "] requires x_min < x_max");
  }
}

ScenarioConfig extract(const ParsedConfig& config, Command command) {
  validate_all_sections(config);

  ScenarioConfig scenario;
  scenario.command = command;
  scenario.units = read_units(config);

  const std::string section_name = to_string(command);
  const auto it = config.sections.find(section_name);
  if (it == config.sections.end()) {
    throw ConfigError("config has no [" + section_name + "] section");
  }
  const Section s(section_name, it->second);

  switch (command) {
    case Command::Scatter: {
      ScatterParams p;
      p.E = s.number("E");
      p.V0 = s.number("V0");
      p.amplitude = s.number_or("amplitude", 1.0);
      if (!(p.amplitude > 0.0)) {
        throw ConfigError("[scatter] amplitude must be > 0");
      }
      scenario.params = p;
      break;
    }
    case Command::Sweep: {
      SweepParams p;
      p.E = s.number("E");
      p.v0_min = s.number("v0_min");
      p.v0_max = s.number("v0_max");
      p.steps = checked_count(s, "steps", s.integer("steps"), 1);
      if (p.steps > 1 && !(p.v0_min < p.v0_max)) {
        throw ConfigError("[sweep] requires v0_min < v0_max when steps > 1");
      }
      scenario.params = p;
      break;
    }
    case Command::Evolve: {
      EvolveParams p;
      read_grid_extent(s, p.x_min, p.x_max, p.n_points);
      p.potential = read_potential(s);
      p.packet = read_packet(s);
      p.t_final = s.number("t_final");
      p.dt = s.number("dt");
      p.record_every = checked_count(s, "record_every",
                                     s.integer_or("record_every", 1), 1);
      p.snapshot_every = checked_count(s, "snapshot_every",
                                       s.integer_or("snapshot_every", 0), 0);
      p.absorbing_boundary = s.boolean_or("absorbing", false);
      if (!(p.t_final >= 0.0)) {
        throw ConfigError("[evolve] t_final must be >= 0");
      }
      if (!(p.dt > 0.0)) {
        throw ConfigError("[evolve] dt must be > 0");
      }
      scenario.params = p;
      break;
    }
    case Command::Decompose: {
      DecomposeParams p;
      read_grid_extent(s, p.x_min, p.x_max, p.n_points);
      p.potential = read_potential(s);
      p.packet = read_packet(s);
      scenario.params = p;
      break;
    }
    case Command::EprDemo: {
      EprDemoParams p;
      p.p1 = s.number_or("p1", 0.75);
      p.half_width = s.number_or("half_width", 8.0);
      p.n_points = checked_count(s, "n_points", s.integer_or("n_points", 512), 8);
      p.refine_levels = checked_count(s, "refine_levels",
                                      s.integer_or("refine_levels", 3), 1);
      const long long seed = s.integer_or("seed", 0);
      if (seed < 0) throw ConfigError("[epr-demo] seed must be >= 0");
      p.seed = static_cast<std::uint64_t>(seed);
      p.random_functions = checked_count(s, "random_functions",
                                         s.integer_or("random_functions", 0), 0);
      if (!(p.half_width > 0.0)) {
        throw ConfigError("[epr-demo] half_width must be > 0");
      }
      scenario.params = p;
      break;
    }
  }
  return scenario;
}

}  // namespace

ScenarioConfig scenario_from_text(const std::string& text, Command command) {
  return extract(parse_config_text(text), command);
}

ScenarioConfig load_scenario(const std::filesystem::path& path,
                             Command command) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot read config file: " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return scenario_from_text(buffer.str(), command);
}

namespace {

void emit(std::string& out, const std::string& key, double value) {
  out += key + " = " + format_number(value) + "\n";
}
void emit(std::string& out, const std::string& key, long long value) {
  out += key + " = " + std::to_string(value) + "\n";
}
void emit(std::string& out, const std::string& key, const std::string& value) {
  out += key + " = " + value + "\n";
}

void emit_potential(std::string& out, const std::optional<PotentialProfile>& p) {
  if (!p.has_value()) {
    emit(out, "potential", std::string("none"));
    return;
  }
  if (p->kind == PotentialKind::SharpStep) {
    emit(out, "potential", std::string("sharp_step"));
  } else {
    emit(out, "potential", std::string("smooth_step"));
  }
  emit(out, "v0", p->V0);
  emit(out, "center", p->center);
  if (p->kind == PotentialKind::SmoothStep) emit(out, "width", p->width);
}

void emit_packet(std::string& out, const WavepacketSpec& packet) {
  emit(out, "x0", packet.x0);
  emit(out, "sigma", packet.sigma);
  emit(out, "p0", packet.p0);
  emit(out, "amplitude", packet.amplitude);
}

}  // namespace

std::string echo_config(const ScenarioConfig& scenario) {
  // Normal form: [units] then the command section; fixed key order; all
  // numbers through the standard formatter. Parsing this text again yields
  // the same scenario (defaults are written out explicitly).
  std::string out = "[units]\n";
  emit(out, "hbar", scenario.units.hbar);
  emit(out, "c", scenario.units.c);
  emit(out, "m", scenario.units.m);
  out += "[" + std::string(to_string(scenario.command)) + "]\n";

  if (const auto* p = std::get_if<ScatterParams>(&scenario.params)) {
    emit(out, "E", p->E);
    emit(out, "V0", p->V0);
    emit(out, "amplitude", p->amplitude);
  } else if (const auto* p = std::get_if<SweepParams>(&scenario.params)) {
    emit(out, "E", p->E);
    emit(out, "v0_min", p->v0_min);
    emit(out, "v0_max", p->v0_max);
    emit(out, "steps", static_cast<long long>(p->steps));
  } else if (const auto* p = std::get_if<EvolveParams>(&scenario.params)) {
    emit(out, "x_min", p->x_min);
    emit(out, "x_max", p->x_max);
    emit(out, "n_points", static_cast<long long>(p->n_points));
    emit_potential(out, p->potential);
    emit_packet(out, p->packet);
    emit(out, "t_final", p->t_final);
    emit(out, "dt", p->dt);
    emit(out, "record_every", static_cast<long long>(p->record_every));
    emit(out, "snapshot_every", static_cast<long long>(p->snapshot_every));
    emit(out, "absorbing", std::string(p->absorbing_boundary ? "true" : "false"));
  } else if (const auto* p = std::get_if<DecomposeParams>(&scenario.params)) {
    emit(out, "x_min", p->x_min);
    emit(out, "x_max", p->x_max);
    emit(out, "n_points", static_cast<long long>(p->n_points));
    emit_potential(out, p->potential);
    emit_packet(out, p->packet);
  } else if (const auto* p = std::get_if<EprDemoParams>(&scenario.params)) {
    emit(out, "p1", p->p1);
    emit(out, "half_width", p->half_width);
    emit(out, "n_points", static_cast<long long>(p->n_points));
    emit(out, "refine_levels", static_cast<long long>(p->refine_levels));
    emit(out, "seed", static_cast<long long>(p->seed));
    emit(out, "random_functions", static_cast<long long>(p->random_functions));
  }
  return out;
}

}  // namespace kgfv
