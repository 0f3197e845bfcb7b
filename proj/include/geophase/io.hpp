#pragma once

// File emission shared by the CLI: 17-significant-digit CSV, JSON result
// envelopes, gnuplot scripts, and write-then-rename persistence.

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "geophase/errors.hpp"
#include "geophase/protocol.hpp"
#include "geophase/topology.hpp"

namespace geophase::io {

using json = nlohmann::json;

inline constexpr int schema_version = 1;

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline double parse_double(std::string_view s) {
  const std::string tmp(s);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(tmp.c_str(), &end);
  if (end == tmp.c_str() || *end != '\0') {
    fail(ErrorKind::domain, "csv: cannot parse number '" + tmp + "'");
  }
  return v;
}

/// Writes to a sibling temporary file and renames it into place.
inline void write_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::domain, "cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) fail(ErrorKind::domain, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline const std::string phase_map_header = "theta,gamma_tau,m,chi_wrapped,chi_unwrapped,contrast,defined";

/// One row per cell, theta-major, LF line endings.
inline std::string phase_map_csv(const PhaseMap& map) {
  std::string out = phase_map_header + "\n";
  out.reserve(out.size() + map.contrast.size() * 120);
  for (std::size_t it = 0; it < map.theta.size(); ++it) {
    for (std::size_t im = 0; im < map.m.size(); ++im) {
      const std::size_t k = map.index(it, im);
      const Strength s = Strength::from_m(map.m[im]);
      out += format_double(map.theta[it]);
      out += ',';
      out += format_double(s.gamma_tau());
      out += ',';
      out += format_double(map.m[im]);
      out += ',';
      out += format_double(map.chi_wrapped[k]);
      out += ',';
      out += format_double(map.chi_unwrapped[k]);
      out += ',';
      out += format_double(map.contrast[k]);
      out += ',';
      out += map.defined[k] ? '1' : '0';
      out += '\n';
    }
  }
  return out;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

/// Inverse of phase_map_csv. Grid metadata not stored in the CSV (N, w) is
/// left at its defaults.
inline PhaseMap parse_phase_map_csv(std::string_view text) {
  auto lines = split(text, '\n');
  if (lines.empty() || lines.front() != phase_map_header) {
    fail(ErrorKind::domain, "csv: unexpected header");
  }
  PhaseMap map;
  std::vector<double> thetas;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (lines[li].empty()) continue;
    const auto f = split(lines[li], ',');
    if (f.size() != 7) fail(ErrorKind::domain, "csv: expected 7 fields on line " + std::to_string(li + 1));
    const double theta = parse_double(f[0]);
    const double m = parse_double(f[2]);
    if (thetas.empty() || thetas.back() != theta) thetas.push_back(theta);
    if (thetas.size() == 1) map.m.push_back(m);
    map.chi_wrapped.push_back(parse_double(f[3]));
    map.chi_unwrapped.push_back(parse_double(f[4]));
    map.contrast.push_back(parse_double(f[5]));
    map.defined.push_back(f[6] == "1");
  }
  map.theta = std::move(thetas);
  if (map.theta.size() * map.m.size() != map.contrast.size()) {
    fail(ErrorKind::domain, "csv: rows do not form a rectangular grid");
  }
  return map;
}

inline std::string surface_csv(const BlochSurface& surf) {
  std::string out = "theta,step,x,y,z\n";
  for (const auto& loop : surf.loops) {
    for (std::size_t j = 0; j < loop.points.size(); ++j) {
      const auto& p = loop.points[j];
      out += format_double(loop.theta) + ',' + std::to_string(j) + ',' + format_double(p.x()) + ',' +
             format_double(p.y()) + ',' + format_double(p.z()) + '\n';
    }
  }
  return out;
}

/// JSON number, or null for non-finite values.
inline json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline json to_json(const InterferenceResult& r) {
  json j{{"contrast", r.contrast},
         {"chi", r.phase},
         {"re", r.amplitude.real()},
         {"im", r.amplitude.imag()},
         {"phase_defined", r.phase_defined},
         {"method", to_string(r.method)}};
  if (r.stderr_re) {
    j["stderr_re"] = *r.stderr_re;
    j["stderr_im"] = *r.stderr_im;
    j["stderr_contrast"] = *r.stderr_contrast;
    j["stderr_chi"] = *r.stderr_phase;
  }
  return j;
}

inline json to_json(const TransitionReport& r) {
  return json{{"m_star", r.m_star},
              {"gamma_tau_star", number(Strength::from_m(r.m_star).gamma_tau())},
              {"bracket", json::array({r.m_lo, r.m_hi})},
              {"contrast_min", r.contrast_min},
              {"chern_below", r.chern_below},
              {"chern_above", r.chern_above},
              {"jump_at_equator", r.jump_at_equator},
              {"singular_theta", r.singular_theta},
              {"bisection_steps", r.bisection_steps}};
}

inline json to_json(const PhaseMap& map) {
  std::vector<json> chi_u;
  chi_u.reserve(map.chi_unwrapped.size());
  for (double x : map.chi_unwrapped) chi_u.push_back(number(x));
  return json{{"theta", map.theta},       {"m", map.m},
              {"chi_wrapped", map.chi_wrapped}, {"chi_unwrapped", chi_u},
              {"contrast", map.contrast}, {"defined", std::vector<bool>(map.defined)}};
}

/// Envelope layout shared by every command.
inline json envelope(std::string_view command, json config, json results, json diagnostics, json timing) {
  return json{{"schema_version", schema_version},
              {"command", std::string(command)},
              {"config", std::move(config)},
              {"results", std::move(results)},
              {"diagnostics", std::move(diagnostics)},
              {"timing", std::move(timing)}};
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline std::string sweep_gnuplot(std::string_view csv, std::string_view png) {
  std::ostringstream gp;
  gp << "# Geometric phase and interference contrast over (m, theta).\n"
     << "set datafile separator ','\n"
     << "set terminal pngcairo size 1300,520\n"
     << "set output '" << png << "'\n"
     << "set multiplot layout 1,2\n"
     << "set xlabel 'm = exp(-gamma tau)'\n"
     << "set ylabel 'theta [rad]'\n"
     << "set yrange [0:pi]\n"
     << "set xrange [0:1]\n"
     << "set palette defined (-3.1416 'blue', 0 'white', 3.1416 'red')\n"
     << "set title 'chi (wrapped)'\n"
     << "set cbrange [-pi:pi]\n"
     << "plot '" << csv << "' every ::1 using 3:1:4 with points pt 5 ps 0.6 palette notitle\n"
     << "set palette grey\n"
     << "set title 'contrast'\n"
     << "set cbrange [0:1]\n"
     << "plot '" << csv << "' every ::1 using 3:1:6 with points pt 5 ps 0.6 palette notitle\n"
     << "unset multiplot\n";
  return gp.str();
}

inline std::string surface_gnuplot(std::string_view csv, std::string_view png) {
  std::ostringstream gp;
  gp << "# Closed measurement trajectories on the Bloch sphere, one loop per theta.\n"
     << "set datafile separator ','\n"
     << "set terminal pngcairo size 800,800\n"
     << "set output '" << png << "'\n"
     << "set view equal xyz\n"
     << "set xyplane 0\n"
     << "set xrange [-1:1]\nset yrange [-1:1]\nset zrange [-1:1]\n"
     << "set xlabel 'x'\nset ylabel 'y'\nset zlabel 'z'\n"
     << "set palette rgb 33,13,10\n"
     << "set cblabel 'theta'\n"
     << "splot '" << csv << "' every ::1 using 3:4:5:1 with points pt 7 ps 0.3 palette notitle\n";
  return gp.str();
}

}  // namespace geophase::io
