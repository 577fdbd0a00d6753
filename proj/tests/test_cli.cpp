#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "kgfv/config.hpp"
#include "kgfv/errors.hpp"
#include "kgfv/evolution.hpp"
#include "kgfv/fv.hpp"
#include "kgfv/grid.hpp"
#include "kgfv/io.hpp"
#include "kgfv/scattering.hpp"
#include "kgfv/units.hpp"

using namespace kgfv;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::path(KGFV_TEST_SCRATCH) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "cannot read " << path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void spit(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << content;
}

int run_cli(const std::string& args) {
  const std::string command =
      std::string("\"") + KGFV_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path config_path(const std::string& name) {
  return fs::path(KGFV_CONFIG_DIR) / name;
}

nlohmann::json load_json(const fs::path& path) {
  return nlohmann::json::parse(slurp(path));
}

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

std::size_t count_occurrences(const std::string& text,
                              const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

}  // namespace

// ---------------------------------------------------------------- parsing --

TEST_CASE("config text parses sections, keys, and comments") {
  const ParsedConfig config = parse_config_text(
      "# full-line comment\n"
      "[scatter]\n"
      "E = 1.25   # trailing comment\n"
      "  V0=3.0\n"
      "\n"
      "[units]\n"
      "hbar = 1\n");
  REQUIRE(config.sections.count("scatter") == 1);
  CHECK(config.sections.at("scatter").at("E") == "1.25");
  CHECK(config.sections.at("scatter").at("V0") == "3.0");
  CHECK(config.sections.at("units").at("hbar") == "1");
}

TEST_CASE("malformed config text fails with a line diagnosis") {
  CHECK_THROWS_AS(parse_config_text("[scatter\nE = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[]\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("E = 1\n"), ConfigError);  // no section
  CHECK_THROWS_AS(parse_config_text("[scatter]\nE\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[scatter]\n= 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[scatter]\nE =\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[scatter]\nE = 1\nE = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[scatter]\n[scatter]\n"), ConfigError);
  try {
    parse_config_text("[scatter]\nbad line\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("strict validation rejects anything unrecognized") {
  CHECK_THROWS_AS(
      scenario_from_text("[scattering]\nE = 1.25\nV0 = 3\n", Command::Scatter),
      ConfigError);
  CHECK_THROWS_AS(
      scenario_from_text("[scatter]\nE = 1.25\nV0 = 3\nfoo = 1\n",
                         Command::Scatter),
      ConfigError);
  // Unknown keys are rejected even in sections the command does not use.
  CHECK_THROWS_AS(
      scenario_from_text(
          "[scatter]\nE = 1.25\nV0 = 3\n[sweep]\noops = 1\n", Command::Scatter),
      ConfigError);
  // The command's own section must exist.
  CHECK_THROWS_AS(scenario_from_text("[sweep]\nE = 1.25\nv0_min = 0\n"
                                     "v0_max = 1\nsteps = 3\n",
                                     Command::Scatter),
                  ConfigError);
  // Missing required key.
  CHECK_THROWS_AS(scenario_from_text("[scatter]\nE = 1.25\n", Command::Scatter),
                  ConfigError);
  // Values must parse completely.
  CHECK_THROWS_AS(
      scenario_from_text("[scatter]\nE = 1.25x\nV0 = 3\n", Command::Scatter),
      ConfigError);
  CHECK_THROWS_AS(
      scenario_from_text("[scatter]\nE = 1.25\nV0 = 3\namplitude = -1\n",
                         Command::Scatter),
      ConfigError);
}

TEST_CASE("one file may carry several command sections") {
  const std::string text =
      "[scatter]\nE = 1.25\nV0 = 3.0\n"
      "[sweep]\nE = 1.25\nv0_min = 0\nv0_max = 4\nsteps = 5\n";
  const ScenarioConfig s1 = scenario_from_text(text, Command::Scatter);
  CHECK(std::get<ScatterParams>(s1.params).V0 == 3.0);
  const ScenarioConfig s2 = scenario_from_text(text, Command::Sweep);
  CHECK(std::get<SweepParams>(s2.params).steps == 5);
}

TEST_CASE("unit overrides and defaults") {
  const ScenarioConfig plain =
      scenario_from_text("[scatter]\nE = 1.25\nV0 = 3\n", Command::Scatter);
  CHECK(plain.units.hbar == 1.0);
  CHECK(plain.units.c == 1.0);
  CHECK(plain.units.m == 1.0);
  const ScenarioConfig scaled = scenario_from_text(
      "[units]\nhbar = 2\nm = 0.5\n[scatter]\nE = 5\nV0 = 0\n",
      Command::Scatter);
  CHECK(scaled.units.hbar == 2.0);
  CHECK(scaled.units.c == 1.0);
  CHECK(scaled.units.m == 0.5);
  CHECK_THROWS_AS(
      scenario_from_text("[units]\nc = 0\n[scatter]\nE = 1.25\nV0 = 3\n",
                         Command::Scatter),
      ConfigError);
}

TEST_CASE("potential key rules") {
  const std::string grid_and_packet =
      "x_min = -10\nx_max = 10\nn_points = 64\nx0 = 0\nsigma = 1\np0 = 0\n";
  // No potential: step keys are forbidden.
  CHECK_THROWS_AS(scenario_from_text("[decompose]\n" + grid_and_packet +
                                         "v0 = 1\n",
                                     Command::Decompose),
                  ConfigError);
  // sharp_step: width is meaningless.
  CHECK_THROWS_AS(scenario_from_text("[decompose]\n" + grid_and_packet +
                                         "potential = sharp_step\nv0 = 1\n"
                                         "center = 0\nwidth = 1\n",
                                     Command::Decompose),
                  ConfigError);
  // smooth_step: width required and positive.
  CHECK_THROWS_AS(scenario_from_text("[decompose]\n" + grid_and_packet +
                                         "potential = smooth_step\nv0 = 1\n"
                                         "center = 0\n",
                                     Command::Decompose),
                  ConfigError);
  CHECK_THROWS_AS(scenario_from_text("[decompose]\n" + grid_and_packet +
                                         "potential = smooth_step\nv0 = 1\n"
                                         "center = 0\nwidth = 0\n",
                                     Command::Decompose),
                  ConfigError);
  CHECK_THROWS_AS(scenario_from_text("[decompose]\n" + grid_and_packet +
                                         "potential = ramp\nv0 = 1\ncenter = 0\n",
                                     Command::Decompose),
                  ConfigError);
  const ScenarioConfig ok = scenario_from_text(
      "[decompose]\n" + grid_and_packet +
          "potential = smooth_step\nv0 = 1\ncenter = 0\nwidth = 0.5\n",
      Command::Decompose);
  const auto& params = std::get<DecomposeParams>(ok.params);
  REQUIRE(params.potential.has_value());
  CHECK(params.potential->kind == PotentialKind::SmoothStep);
  CHECK(params.potential->width == 0.5);
}

TEST_CASE("range and count validation") {
  CHECK_THROWS_AS(scenario_from_text("[sweep]\nE = 1.25\nv0_min = 2\n"
                                     "v0_max = 1\nsteps = 5\n",
                                     Command::Sweep),
                  ConfigError);
  // steps = 1 does not need an ordered range.
  CHECK_NOTHROW(scenario_from_text(
      "[sweep]\nE = 1.25\nv0_min = 2\nv0_max = 2\nsteps = 1\n", Command::Sweep));
  CHECK_THROWS_AS(scenario_from_text("[sweep]\nE = 1.25\nv0_min = 0\n"
                                     "v0_max = 1\nsteps = 0\n",
                                     Command::Sweep),
                  ConfigError);
  const std::string evolve_base =
      "[evolve]\nx_min = -10\nx_max = 10\nn_points = 64\nx0 = 0\nsigma = 1\n"
      "p0 = 0\ndt = 0.05\n";
  CHECK_THROWS_AS(
      scenario_from_text(evolve_base + "t_final = -1\n", Command::Evolve),
      ConfigError);
  CHECK_THROWS_AS(scenario_from_text(
                      "[evolve]\nx_min = 10\nx_max = -10\nn_points = 64\n"
                      "x0 = 0\nsigma = 1\np0 = 0\nt_final = 1\ndt = 0.05\n",
                      Command::Evolve),
                  ConfigError);
  CHECK_THROWS_AS(
      scenario_from_text(evolve_base + "t_final = 1\nrecord_every = 0\n",
                         Command::Evolve),
      ConfigError);
  CHECK_THROWS_AS(
      scenario_from_text(evolve_base + "t_final = 1\nabsorbing = maybe\n",
                         Command::Evolve),
      ConfigError);
  CHECK_THROWS_AS(
      scenario_from_text("[epr-demo]\nseed = -3\n", Command::EprDemo),
      ConfigError);
  CHECK_THROWS_AS(
      scenario_from_text("[epr-demo]\nn_points = 4\n", Command::EprDemo),
      ConfigError);
}

TEST_CASE("epr-demo defaults") {
  const ScenarioConfig scenario =
      scenario_from_text("[epr-demo]\np1 = 0.6\n", Command::EprDemo);
  const auto& params = std::get<EprDemoParams>(scenario.params);
  CHECK(params.p1 == 0.6);
  CHECK(params.half_width == 8.0);
  CHECK(params.n_points == 512);
  CHECK(params.refine_levels == 3);
  CHECK(params.seed == 0);
  CHECK(params.random_functions == 0);
}

TEST_CASE("echoed configs are a fixed point of parse-then-echo") {
  const std::string messy =
      "# scattering setup\n"
      "[evolve]\n"
      "  x_max =  150.0   # right wall\n"
      "x_min = -150\n"
      "n_points = 4096\n"
      "potential = smooth_step\n"
      "v0 = 0.100\n"
      "center = 0\n"
      "width = 0.5\n"
      "x0 = -60\n"
      "sigma = 10\n"
      "p0 = 0.75\n"
      "t_final = 160\n"
      "dt = 0.03\n";
  const ScenarioConfig first = scenario_from_text(messy, Command::Evolve);
  const std::string echo1 = echo_config(first);
  const ScenarioConfig second = scenario_from_text(echo1, Command::Evolve);
  const std::string echo2 = echo_config(second);
  CHECK(echo1 == echo2);
  // Defaults are written out explicitly in the normal form.
  CHECK(echo1.find("record_every = 1") != std::string::npos);
  CHECK(echo1.find("absorbing = false") != std::string::npos);
  CHECK(echo1.find("[units]") != std::string::npos);
}

TEST_CASE("every shipped config parses and echoes stably") {
  const std::pair<const char*, Command> shipped[] = {
      {"scatter_klein.ini", Command::Scatter},
      {"sweep_regimes.ini", Command::Sweep},
      {"evolve_free.ini", Command::Evolve},
      {"evolve_klein.ini", Command::Evolve},
      {"evolve_evanescent.ini", Command::Evolve},
      {"evolve_transmission.ini", Command::Evolve},
      {"decompose_packet.ini", Command::Decompose},
      {"epr_demo.ini", Command::EprDemo},
  };
  for (const auto& [name, command] : shipped) {
    CAPTURE(name);
    const ScenarioConfig scenario = load_scenario(config_path(name), command);
    const std::string echo1 = echo_config(scenario);
    const std::string echo2 =
        echo_config(scenario_from_text(echo1, command));
    CHECK(echo1 == echo2);
  }
  CHECK_THROWS_AS(load_scenario(config_path("no_such_file.ini"),
                                Command::Scatter),
                  ConfigError);
}

// ------------------------------------------------------------- formatting --

TEST_CASE("the one number formatter") {
  CHECK(format_number(0.75) == "0.75");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(-3.0) == "-3");
  CHECK(format_number(0.001) == "0.001");
  CHECK(format_number(1e21) == "1e+21");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(10.1514923157207751) == "10.1514923157");
  CHECK(format_number(0.0) == "0");
}

TEST_CASE("json escaping") {
  CHECK(json_escape("plain") == "plain");
  CHECK(json_escape("say \"hi\"") == "say \\\"hi\\\"");
  CHECK(json_escape("a\\b") == "a\\\\b");
  CHECK(json_escape("line\nbreak\tand\rreturn") ==
        "line\\nbreak\\tand\\rreturn");
  CHECK(json_escape(std::string(1, '\x01')) == "\\u0001");
}

TEST_CASE("content digests") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64_hex("") == "cbf29ce484222325");
  CHECK(fnv1a64_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a64_hex("ab") != fnv1a64_hex("ba"));
  CHECK(fnv1a64_hex("anything").size() == 16);
}

TEST_CASE("atomic file writes create directories and replace cleanly") {
  const fs::path dir = scratch_dir("atomic_write");
  const fs::path target = dir / "nested" / "deeper" / "out.txt";
  write_file_atomic(target, "first\n");
  CHECK(slurp(target) == "first\n");
  write_file_atomic(target, "second\n");
  CHECK(slurp(target) == "second\n");
  CHECK_FALSE(fs::exists(target.string() + ".tmp"));
}

// ----------------------------------------------------------- file builders --

TEST_CASE("time-series rows") {
  SimulationRecord record;
  record.times = {0.0, 0.5};
  record.Q_total = {31.25, 31.25};
  record.Q_left = {31.0, 30.0};
  record.Q_right = {0.25, 1.25};
  record.max_abs_psi = {1.0, 0.99};
  CHECK(timeseries_csv(record) ==
        "t,Q_total,Q_left,Q_right,max_abs_psi\n"
        "0,31.25,31,0.25,1\n"
        "0.5,31.25,30,1.25,0.99\n");
}

TEST_CASE("snapshot rows") {
  const Grid1D grid(0.0, 1.0, 2);
  FVField field{grid,
                {Complex(1.0, 0.0), Complex(0.0, 0.5)},
                {Complex(0.0, 0.0), Complex(0.0, 0.0)}};
  CHECK(snapshot_csv(field) ==
        "x,re_phi,im_phi,re_chi,im_chi,rho\n"
        "0,1,0,0,0,1\n"
        "1,0,0.5,0,0,0.25\n");
}

TEST_CASE("sweep rows keep failed entries inline") {
  SweepEntry good;
  good.V0 = 1.0;
  good.ok = true;
  good.solution.p_prime = Complex(0.0, 0.5);
  good.solution.R = 1.0;
  good.solution.T = 0.0;
  good.solution.regime = Regime::Evanescent;
  SweepEntry bad;
  bad.V0 = 2.5;
  bad.ok = false;
  bad.error = "x, y\nz";
  CHECK(sweep_csv({good, bad}) ==
        "V0,p_prime_re,p_prime_im,R,T,regime,error\n"
        "1,0,0.5,1,0,Evanescent,\n"
        "2.5,,,,,,x; y;z\n");
}

TEST_CASE("scatter record carries the full breakdown") {
  const Units u = natural_units();
  const ScatteringSolution s = solve_step(1.25, 3.0, u);
  const StepDensities d = plane_wave_densities(s, Complex(1.0, 0.0), u);
  const std::string json = scatter_record_json(s, d);
  for (const char* key :
       {"E", "V0", "p", "p_prime_re", "p_prime_im", "b_over_a_re",
        "b_over_a_im", "bprime_over_a_re", "bprime_over_a_im", "R", "T",
        "regime", "rho_i", "j_i", "rho_r", "j_r", "rho_t", "j_t",
        "flux_residual"}) {
    CAPTURE(key);
    CHECK(json.find(std::string("\"") + key + "\":") != std::string::npos);
  }
  CHECK(json.find("\"regime\": \"KleinZone\"") != std::string::npos);
  const nlohmann::json parsed = nlohmann::json::parse(json);
  CHECK(parsed["R"].get<double>() ==
        doctest::Approx(10.1514923157).epsilon(1e-10));
  CHECK(std::abs(parsed["flux_residual"].get<double>()) < 1e-11);
}

TEST_CASE("manifest layout") {
  RunManifest m;
  m.command = "scatter";
  m.version = "1.2.3";
  m.config_echo = "a\nb";
  m.duration_ms = 5;
  m.checks = {{"ok_check", true}, {"bad", false}};
  m.outputs = {{"f.csv", "0123456789abcdef"}};
  const std::string expected =
      "{\n"
      "  \"command\": \"scatter\",\n"
      "  \"version\": \"1.2.3\",\n"
      "  \"duration_ms\": 5,\n"
      "  \"config_echo\": \"a\\nb\",\n"
      "  \"checks\": [\n"
      "    {\"name\": \"ok_check\", \"pass\": true},\n"
      "    {\"name\": \"bad\", \"pass\": false}\n"
      "  ],\n"
      "  \"outputs\": [\n"
      "    {\"file\": \"f.csv\", \"fnv1a64\": \"0123456789abcdef\"}\n"
      "  ]\n"
      "}\n";
  CHECK(manifest_json(m) == expected);

  RunManifest empty;
  empty.command = "sweep";
  const std::string rendered = manifest_json(empty);
  CHECK(rendered.find("\"checks\": []") != std::string::npos);
  CHECK(rendered.find("\"outputs\": []") != std::string::npos);
}

// ------------------------------------------------------------- end to end --

TEST_CASE("cli scatter reproduces the supercritical benchmark") {
  const fs::path dir = scratch_dir("cli_scatter");
  const int code = run_cli("scatter --config \"" +
                           config_path("scatter_klein.ini").string() +
                           "\" --out \"" + dir.string() + "\"");
  CHECK(code == 0);
  const std::string json = slurp(dir / "scatter.json");
  const nlohmann::json record = nlohmann::json::parse(json);
  CHECK(record["R"].get<double>() ==
        doctest::Approx(10.1514923157207751).epsilon(1e-9));
  CHECK(record["T"].get<double>() ==
        doctest::Approx(-9.15149231572077508).epsilon(1e-9));
  CHECK(record["rho_t"].get<double>() < 0.0);
  CHECK(record["j_t"].get<double>() < 0.0);
  CHECK(record["regime"] == "KleinZone");
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK_FALSE(fs::exists(dir / "error.json"));

  // The manifest digest of scatter.json matches the file on disk, and the
  // embedded config echo is itself a loadable, stable config.
  const nlohmann::json manifest = load_json(dir / "manifest.json");
  CHECK(manifest["command"] == "scatter");
  bool digest_checked = false;
  for (const auto& output : manifest["outputs"]) {
    if (output["file"] == "scatter.json") {
      CHECK(output["fnv1a64"].get<std::string>() == fnv1a64_hex(json));
      digest_checked = true;
    }
  }
  CHECK(digest_checked);
  for (const auto& check : manifest["checks"]) {
    CAPTURE(check["name"].get<std::string>());
    CHECK(check["pass"].get<bool>());
  }

  const std::string echo = manifest["config_echo"].get<std::string>();
  const ScenarioConfig reloaded = scenario_from_text(echo, Command::Scatter);
  CHECK(echo_config(reloaded) == echo);
  CHECK(std::get<ScatterParams>(reloaded.params).E == 1.25);
}

TEST_CASE("cli error records carry kind, message, and exit code") {
  struct Case {
    const char* name;
    const char* config;
    int code;
    const char* kind;
  };
  const Case cases[] = {
      {"unknown_key", "[scatter]\nE = 1.25\nV0 = 3.0\ncoupling = 7\n", 2,
       "config"},
      {"sub_rest_energy", "[scatter]\nE = 0.5\nV0 = 1.0\n", 3, "precondition"},
      {"singular_matching", "[scatter]\nE = 1.25\nV0 = 2.5\n", 4, "numerical"},
  };
  for (const Case& c : cases) {
    CAPTURE(c.name);
    const fs::path dir = scratch_dir(std::string("cli_err_") + c.name);
    const fs::path cfg = dir / "run.ini";
    spit(cfg, c.config);
    const int code = run_cli("scatter --config \"" + cfg.string() +
                             "\" --out \"" + dir.string() + "\"");
    CHECK(code == c.code);
    const nlohmann::json error = load_json(dir / "error.json");
    CHECK(error["error"]["kind"] == c.kind);
    CHECK(error["error"]["exit_code"].get<int>() == c.code);
    CHECK_FALSE(error["error"]["message"].get<std::string>().empty());
    CHECK_FALSE(fs::exists(dir / "scatter.json"));
  }
}

TEST_CASE("cli rejects bad invocations with the config exit code") {
  CHECK(run_cli("scatter") == 2);                      // missing --config
  CHECK(run_cli("vaporize --config x.ini") == 2);      // unknown subcommand
  const fs::path dir = scratch_dir("cli_missing_file");
  CHECK(run_cli("scatter --config \"" + (dir / "absent.ini").string() +
                "\" --out \"" + dir.string() + "\"") == 2);
  CHECK(load_json(dir / "error.json")["error"]["kind"] == "config");
}

TEST_CASE("cli sweep emits one row per step including the singular one") {
  const fs::path dir = scratch_dir("cli_sweep");
  const int code = run_cli("sweep --config \"" +
                           config_path("sweep_regimes.ini").string() +
                           "\" --out \"" + dir.string() + "\"");
  CHECK(code == 0);
  const std::string csv = slurp(dir / "sweep.csv");
  CHECK(count_lines(csv) == 82);  // header + 81 rows
  CHECK(csv.rfind("V0,p_prime_re,p_prime_im,R,T,regime,error\n", 0) == 0);
  CHECK(csv.find("Transmission") != std::string::npos);
  CHECK(csv.find("Evanescent") != std::string::npos);
  CHECK(csv.find("KleinZone") != std::string::npos);
  // Exactly one singular row (V0 = 2E), kept inline with its message.
  CHECK(count_occurrences(csv, ",,,,,,") == 1);
  CHECK(csv.find("singular") != std::string::npos);
}

TEST_CASE("cli evolve writes the time series and requested snapshots") {
  const fs::path dir = scratch_dir("cli_evolve");
  const fs::path cfg = dir / "run.ini";
  spit(cfg,
       "[evolve]\n"
       "x_min = -40\nx_max = 40\nn_points = 512\n"
       "x0 = 0\nsigma = 4\np0 = 0.5\n"
       "t_final = 0.5\ndt = 0.05\n"
       "record_every = 3\nsnapshot_every = 5\n");
  const int code = run_cli("evolve --config \"" + cfg.string() +
                           "\" --out \"" + dir.string() + "\"");
  CHECK(code == 0);

  const std::string csv = slurp(dir / "timeseries.csv");
  CHECK(csv.rfind("t,Q_total,Q_left,Q_right,max_abs_psi\n", 0) == 0);
  CHECK(count_lines(csv) == 6);  // header + rows at steps 0,3,6,9,10
  const std::string snapshot = slurp(dir / "snapshot_000000.csv");
  CHECK(snapshot.rfind("x,re_phi,im_phi,re_chi,im_chi,rho\n", 0) == 0);
  CHECK(count_lines(snapshot) == 513);  // header + one row per grid point
  CHECK(fs::exists(dir / "snapshot_000002.csv"));
  CHECK_FALSE(fs::exists(dir / "snapshot_000003.csv"));
  const std::string manifest = slurp(dir / "manifest.json");
  CHECK(count_occurrences(manifest, "\"file\":") == 4);

  // --snapshots 0 overrides the config cadence.
  const fs::path quiet = scratch_dir("cli_evolve_quiet");
  const int quiet_code =
      run_cli("evolve --config \"" + cfg.string() + "\" --out \"" +
              quiet.string() + "\" --snapshots 0");
  CHECK(quiet_code == 0);
  CHECK(fs::exists(quiet / "timeseries.csv"));
  CHECK_FALSE(fs::exists(quiet / "snapshot_000000.csv"));
}

TEST_CASE("cli decompose reports the component split") {
  const fs::path dir = scratch_dir("cli_decompose");
  const int code = run_cli("decompose --config \"" +
                           config_path("decompose_packet.ini").string() +
                           "\" --out \"" + dir.string() + "\"");
  CHECK(code == 0);
  const std::string csv = slurp(dir / "decomposition.csv");
  CHECK(csv.rfind("x,re_phi,im_phi,re_chi,im_chi,rho\n", 0) == 0);
  const std::string manifest = slurp(dir / "manifest.json");
  CHECK(manifest.find("\"pass\": false") == std::string::npos);
}

TEST_CASE("cli epr-demo passes its internal checks at the default ladder") {
  const fs::path dir = scratch_dir("cli_epr");
  const int code = run_cli("epr-demo --config \"" +
                           config_path("epr_demo.ini").string() +
                           "\" --out \"" + dir.string() + "\"");
  CHECK(code == 0);
  const nlohmann::json demo = load_json(dir / "epr_demo.json");
  std::vector<std::string> labels;
  for (const auto& entry : demo["commutators"]) {
    labels.push_back(entry["commutator"].get<std::string>());
    const auto& levels = entry["levels"];
    REQUIRE(levels.size() == 3);
    CHECK(levels[0]["n"].get<int>() == 512);
    CHECK(levels[2]["n"].get<int>() == 2048);
    const double first = levels[0]["residual"].get<double>();
    const double last = levels[2]["residual"].get<double>();
    if (entry["commutator"] != "[x1, p1]") {
      CHECK(last < 1e-6);   // vanishing pair at the finest grid
      CHECK(last < first);  // and it refines on the way there
    } else {
      CHECK(last == doctest::Approx(1.0).epsilon(0.1));  // ~hbar, not vanishing
    }
  }
  CHECK(labels == std::vector<std::string>{"[x1 - x2, p1 + p2]",
                                           "[x1 + x2, p1 + p2c]", "[x1, p1]"});
  const std::string manifest = slurp(dir / "manifest.json");
  CHECK(manifest.find("\"pass\": false") == std::string::npos);

  // A single coarse level cannot meet the vanishing threshold: the checks
  // fail, the outputs are still written, and the exit code says "numerical".
  const fs::path coarse = scratch_dir("cli_epr_coarse");
  const int coarse_code =
      run_cli("epr-demo --config \"" + config_path("epr_demo.ini").string() +
              "\" --out \"" + coarse.string() + "\" --refine 1");
  CHECK(coarse_code == 4);
  CHECK(fs::exists(coarse / "epr_demo.json"));
  CHECK(slurp(coarse / "manifest.json").find("\"pass\": false") !=
        std::string::npos);
}
