#include "kgfv/io.hpp"

#include <cstdio>
#include <fstream>
#include <system_error>

#include "kgfv/errors.hpp"

namespace kgfv {

std::string format_number(double value) {
  // %.12g is locale-independent for the C locale snprintf uses here and
  // round-trips every value this library produces at 12 significant digits.
  char buf[40];
  const int len = std::snprintf(buf, sizeof(buf), "%.12g", value);
  if (len < 0 || len >= static_cast<int>(sizeof(buf))) {
    throw NumericalError("number formatting failed");
  }
  return std::string(buf, static_cast<std::size_t>(len));
}

std::string json_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (const char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x",
                        static_cast<unsigned>(static_cast<unsigned char>(ch)));
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const char ch : data) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string fnv1a64_hex(std::string_view data) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(data)));
  return std::string(buf, 16);
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::error_code ec;
  fs::create_directories(dir, ec);  // ok if it already exists
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw ConfigError("cannot open for writing: " + tmp.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      throw ConfigError("write failed: " + tmp.string());
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    throw ConfigError("rename failed for " + path.string() + ": " + ec.message());
  }
}

std::string timeseries_csv(const SimulationRecord& record) {
  std::string out = "t,Q_total,Q_left,Q_right,max_abs_psi\n";
  for (std::size_t r = 0; r < record.times.size(); ++r) {
    out += format_number(record.times[r]);
    out += ',';
    out += format_number(record.Q_total[r]);
    out += ',';
    out += format_number(record.Q_left[r]);
    out += ',';
    out += format_number(record.Q_right[r]);
    out += ',';
    out += format_number(record.max_abs_psi[r]);
    out += '\n';
  }
  return out;
}

std::string snapshot_csv(const FVField& field) {
  const std::vector<double> rho = charge_density(field);
  std::string out = "x,re_phi,im_phi,re_chi,im_chi,rho\n";
  for (int k = 0; k < field.grid.n_points(); ++k) {
    const auto idx = static_cast<std::size_t>(k);
    out += format_number(field.grid.point(k));
    out += ',';
    out += format_number(field.phi[idx].real());
    out += ',';
    out += format_number(field.phi[idx].imag());
    out += ',';
    out += format_number(field.chi[idx].real());
    out += ',';
    out += format_number(field.chi[idx].imag());
    out += ',';
    out += format_number(rho[idx]);
    out += '\n';
  }
  return out;
}

std::string sweep_csv(const std::vector<SweepEntry>& entries) {
  std::string out = "V0,p_prime_re,p_prime_im,R,T,regime,error\n";
  for (const auto& e : entries) {
    out += format_number(e.V0);
    if (e.ok) {
      out += ',';
      out += format_number(e.solution.p_prime.real());
      out += ',';
      out += format_number(e.solution.p_prime.imag());
      out += ',';
      out += format_number(e.solution.R);
      out += ',';
      out += format_number(e.solution.T);
      out += ',';
      out += to_string(e.solution.regime);
      out += ",\n";
    } else {
      // Keep the row; error text goes in the last column (commas stripped so
      // the file stays single-delimiter).
      std::string msg = e.error;
      for (auto& ch : msg) {
        if (ch == ',' || ch == '\n') ch = ';';
      }
      out += ",,,,,," + msg + "\n";
    }
  }
  return out;
}

std::string scatter_record_json(const ScatteringSolution& s,
                                const StepDensities& d) {
  const double flux_residual = d.j_i + d.j_r - d.j_t;
  std::string out = "{\n";
  auto field = [&out](const char* key, double value, bool last = false) {
    out += "  \"";
    out += key;
    out += "\": ";
    out += format_number(value);
    out += last ? "\n" : ",\n";
  };
  field("E", s.E);
  field("V0", s.V0);
  field("p", s.p);
  field("p_prime_re", s.p_prime.real());
  field("p_prime_im", s.p_prime.imag());
  field("b_over_a_re", s.b_over_a.real());
  field("b_over_a_im", s.b_over_a.imag());
  field("bprime_over_a_re", s.bprime_over_a.real());
  field("bprime_over_a_im", s.bprime_over_a.imag());
  field("R", s.R);
  field("T", s.T);
  out += "  \"regime\": \"";
  out += to_string(s.regime);
  out += "\",\n";
  field("rho_i", d.rho_i);
  field("j_i", d.j_i);
  field("rho_r", d.rho_r);
  field("j_r", d.j_r);
  field("rho_t", d.rho_t);
  field("j_t", d.j_t);
  field("flux_residual", flux_residual, /*last=*/true);
  out += "}\n";
  return out;
}

std::string manifest_json(const RunManifest& m) {
  std::string out = "{\n";
  out += "  \"command\": \"" + json_escape(m.command) + "\",\n";
  out += "  \"version\": \"" + json_escape(m.version) + "\",\n";
  out += "  \"duration_ms\": " + std::to_string(m.duration_ms) + ",\n";
  out += "  \"config_echo\": \"" + json_escape(m.config_echo) + "\",\n";
  out += "  \"checks\": [";
  for (std::size_t k = 0; k < m.checks.size(); ++k) {
    out += (k == 0) ? "\n" : ",\n";
    out += "    {\"name\": \"" + json_escape(m.checks[k].name) +
           "\", \"pass\": " + (m.checks[k].pass ? "true" : "false") + "}";
  }
  out += m.checks.empty() ? "],\n" : "\n  ],\n";
  out += "  \"outputs\": [";
  for (std::size_t k = 0; k < m.outputs.size(); ++k) {
    out += (k == 0) ? "\n" : ",\n";
    out += "    {\"file\": \"" + json_escape(m.outputs[k].file) +
           "\", \"fnv1a64\": \"" + json_escape(m.outputs[k].fnv1a64) + "\"}";
  }
  out += m.outputs.empty() ? "]\n" : "\n  ]\n";
  out += "}\n";
  return out;
}

}  // namespace kgfv
