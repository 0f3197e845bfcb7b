// geophase command-line front end.
//
//   geophase phase      --theta T (--m M | --gamma-tau G) [--projective]
//   geophase sweep      [--grid-theta A:B:K] [--grid-m A:B:K]
//   geophase transition [--tol 1e-4] [--also-n 24,96] [--assert-jump pi]
//   geophase mc         --theta T (--m M | --gamma-tau G) [--samples N] [--seed S]
//   geophase surface    (--m M | --gamma-tau G) [--grid-theta 0:pi:K] [--interp P]
//   geophase schema
//
// Exit codes: 0 ok, 1 check failed, 2 invalid configuration, 3 oversize grid,
// 4 no transition, 5 insufficient statistics, 6 singular surface.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "geophase/envelope_schema.hpp"
#include "geophase/geophase.hpp"
#include "geophase/io.hpp"

namespace {

using namespace geophase;
using json = nlohmann::json;

enum Exit : int {
  ok = 0,
  check_failed = 1,
  invalid_config = 2,
  oversize_grid = 3,
  no_transition = 4,
  insufficient_statistics = 5,
  singular_surface = 6,
};

struct ExitError {
  int code;
  std::string message;
};

[[noreturn]] void exit_with(int code, const std::string& message) { throw ExitError{code, message}; }

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    exit_with(invalid_config, "invalid " + what + ": '" + text + "'");
  }
}

/// Radians by default. Accepts a trailing "deg", and pi expressions such as
/// "pi", "pi/2", "2pi/3".
double parse_angle(std::string text, const std::string& what) {
  text = trim(text);
  if (text.size() > 3 && text.ends_with("deg")) {
    return parse_number(trim(text.substr(0, text.size() - 3)), what) * std::numbers::pi / 180.0;
  }
  if (const auto p = text.find("pi"); p != std::string::npos) {
    const std::string head = trim(text.substr(0, p));
    std::string tail = trim(text.substr(p + 2));
    double v = std::numbers::pi;
    if (!head.empty()) v *= parse_number(head == "-" ? "-1" : head, what);
    if (!tail.empty()) {
      if (tail.front() != '/') exit_with(invalid_config, "invalid " + what + ": '" + text + "'");
      v /= parse_number(trim(tail.substr(1)), what);
    }
    return v;
  }
  return parse_number(text, what);
}

struct GridSpec {
  double from = 0.0;
  double to = 0.0;
  std::size_t count = 0;

  std::vector<double> values() const { return linspace(from, to, count); }
  std::string str() const { return io::format_double(from) + ":" + io::format_double(to) + ":" + std::to_string(count); }
};

GridSpec parse_grid(const std::string& text, bool angles, const std::string& what) {
  const auto parts = io::split(text, ':');
  if (parts.size() != 3) exit_with(invalid_config, "invalid " + what + " '" + text + "', expected A:B:K");
  GridSpec g;
  g.from = angles ? parse_angle(std::string(parts[0]), what) : parse_number(std::string(parts[0]), what);
  g.to = angles ? parse_angle(std::string(parts[1]), what) : parse_number(std::string(parts[1]), what);
  const double k = parse_number(trim(std::string(parts[2])), what);
  if (!(k >= 1.0) || k != std::floor(k)) exit_with(invalid_config, "invalid " + what + " count in '" + text + "'");
  g.count = static_cast<std::size_t>(k);
  if (g.count > 1 && !(g.to > g.from)) exit_with(invalid_config, "invalid " + what + ": need A < B");
  return g;
}

/// Flag values (when given) take precedence over the JSON config file, which
/// takes precedence over defaults.
class Settings {
 public:
  void attach(CLI::App* cmd) { cmd_ = cmd; }

  void load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) exit_with(invalid_config, "cannot read config file '" + path + "'");
    try {
      json j = json::parse(in);
      // Accept either a bare config object or a whole result envelope.
      file_ = j.contains("config") && j["config"].is_object() ? j["config"] : j;
    } catch (const json::exception& e) {
      exit_with(invalid_config, "config file '" + path + "': " + e.what());
    }
    if (!file_.is_object()) exit_with(invalid_config, "config file must hold a JSON object");
  }

  bool flag_given(const std::string& key) const { return cmd_->count("--" + key) > 0; }
  bool file_has(const std::string& key) const { return file_.contains(key) && !file_[key].is_null(); }
  bool has(const std::string& key) const { return flag_given(key) || file_has(key); }

  std::optional<std::string> text(const std::string& key) const {
    if (flag_given(key)) return cmd_->get_option("--" + key)->as<std::string>();
    if (file_has(key)) {
      const json& v = file_[key];
      return v.is_string() ? v.get<std::string>() : v.dump();
    }
    return std::nullopt;
  }

  double number(const std::string& key, std::optional<double> def = {}) const {
    if (!flag_given(key) && file_has(key) && file_[key].is_number()) return file_[key].get<double>();
    if (auto t = text(key)) return parse_number(*t, "--" + key);
    if (def) return *def;
    exit_with(invalid_config, "missing required option --" + key);
  }

  double angle(const std::string& key, std::optional<double> def = {}) const {
    if (!flag_given(key) && file_has(key) && file_[key].is_number()) return file_[key].get<double>();
    if (auto t = text(key)) return parse_angle(*t, "--" + key);
    if (def) return *def;
    exit_with(invalid_config, "missing required option --" + key);
  }

  bool boolean(const std::string& key) const {
    if (flag_given(key)) return true;
    if (file_has(key)) {
      if (!file_[key].is_boolean()) exit_with(invalid_config, "config key '" + key + "' must be a boolean");
      return file_[key].get<bool>();
    }
    return false;
  }

  std::string string(const std::string& key, const std::string& def) const { return text(key).value_or(def); }

  std::int64_t integer(const std::string& key, std::int64_t def) const {
    const double v = number(key, static_cast<double>(def));
    if (v != std::floor(v)) exit_with(invalid_config, "--" + key + " must be an integer");
    return static_cast<std::int64_t>(v);
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t def) const {
    if (!flag_given(key) && file_has(key) && file_[key].is_number_unsigned()) return file_[key].get<std::uint64_t>();
    if (auto t = text(key)) {
      try {
        std::size_t used = 0;
        const auto v = std::stoull(*t, &used);
        if (used == t->size() && t->find('-') == std::string::npos) return v;
      } catch (const std::exception&) {
      }
      exit_with(invalid_config, "--" + key + " must be a non-negative integer");
    }
    return def;
  }

 private:
  CLI::App* cmd_ = nullptr;
  json file_ = json::object();
};

struct Common {
  int n_meas = 6;
  double ref_weight = 0.5;
  std::string format = "both";
  std::filesystem::path out = ".";
  bool timing = false;

  bool want_csv() const { return format == "csv" || format == "both"; }
  bool want_json_data() const { return format == "json" || format == "both"; }
};

Common resolve_common(const Settings& s, const std::string& out_dir) {
  Common c;
  c.n_meas = static_cast<int>(s.integer("n-meas", 6));
  if (c.n_meas < 1) exit_with(invalid_config, "--n-meas must be positive");
  c.ref_weight = s.number("ref-weight", 0.5);
  if (!(c.ref_weight > 0.0 && c.ref_weight < 1.0)) exit_with(invalid_config, "--ref-weight must lie in (0, 1)");
  c.format = s.string("format", "both");
  if (c.format != "csv" && c.format != "json" && c.format != "both") {
    exit_with(invalid_config, "--format must be csv, json or both");
  }
  c.out = out_dir.empty() ? std::filesystem::path(".") : std::filesystem::path(out_dir);
  c.timing = s.boolean("timing");
  return c;
}

Strength resolve_strength(const Settings& s, bool projective) {
  if (projective) {
    if ((s.flag_given("m") && s.number("m") != 0.0)) exit_with(invalid_config, "--projective requires m = 0");
    return Strength::from_m(0.0);
  }
  const bool flag_m = s.flag_given("m"), flag_g = s.flag_given("gamma-tau");
  if (flag_m && flag_g) exit_with(invalid_config, "--m and --gamma-tau are mutually exclusive");
  if (flag_g || (!flag_m && !s.file_has("m") && s.file_has("gamma-tau"))) {
    return Strength::from_gamma_tau(s.number("gamma-tau"));
  }
  if (!s.has("m")) exit_with(invalid_config, "one of --m or --gamma-tau is required");
  return Strength::from_m(s.number("m"));
}

json common_echo(const Common& c) {
  return json{{"n-meas", c.n_meas}, {"ref-weight", c.ref_weight}, {"format", c.format}};
}

json timing_json(const Common& c, std::chrono::steady_clock::time_point start) {
  if (!c.timing) return json{{"recorded", false}};
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return json{{"recorded", true}, {"wall_seconds", secs}};
}

/// Every output is rendered first and only then persisted, so an error never
/// leaves partial files behind.
void persist(const Common& c, const std::vector<std::pair<std::string, std::string>>& files) {
  for (const auto& [name, content] : files) io::write_atomic(c.out / name, content);
}

std::string line(const char* fmt, double a, double b, double d, double e) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, a, b, d, e);
  return buf;
}

int cmd_phase(const Settings& s, const Common& c) {
  const auto start = std::chrono::steady_clock::now();
  const double theta = s.angle("theta");
  const bool projective = s.boolean("projective");
  const Strength strength = resolve_strength(s, projective);
  ProtocolSpec spec = ProtocolSpec::make(theta, strength, c.n_meas, c.ref_weight);
  const ProtocolRun run = projective ? run_protocol_projective(spec) : run_protocol(spec);

  json diag{{"phase_defined", run.result.phase_defined}, {"contrast_floor", contrast_floor}};
  if (!strength.is_projective()) diag["completeness_residual"] = completeness_residual(strength);
  json config = common_echo(c);
  config.update({{"theta", theta}, {"m", strength.m()}, {"projective", projective}});
  json results{{"theta", theta},
               {"m", strength.m()},
               {"gamma_tau", io::number(strength.gamma_tau())},
               {"interference", io::to_json(run.result)}};
  persist(c, {{"phase.json", io::dump(io::envelope("phase", config, results, diag, timing_json(c, start)))}});
  std::cout << "theta=" << io::format_double(theta) << " m=" << io::format_double(strength.m())
            << " chi=" << io::format_double(run.result.phase) << " contrast=" << io::format_double(run.result.contrast)
            << (run.result.phase_defined ? "" : " (phase undefined)") << "\n";
  return ok;
}

int cmd_sweep(const Settings& s, const Common& c) {
  const auto start = std::chrono::steady_clock::now();
  const GridSpec gt = parse_grid(s.string("grid-theta", "0:pi:64"), true, "--grid-theta");
  const GridSpec gm = parse_grid(s.string("grid-m", "0:1:64"), false, "--grid-m");
  if (static_cast<double>(gt.count) * static_cast<double>(gm.count) > 1e6) {
    exit_with(oversize_grid, "grid has " + std::to_string(gt.count * gm.count) + " cells, limit is 1000000");
  }
  if (gt.from < 0.0 || gt.to > std::numbers::pi) exit_with(invalid_config, "--grid-theta must lie in [0, pi]");
  if (gm.from < 0.0 || gm.to > 1.0) exit_with(invalid_config, "--grid-m must lie in [0, 1]");
  const PhaseMap map = sweep_phase_map(gt.values(), gm.values(), c.n_meas, c.ref_weight);

  std::size_t best = 0, n_defined = 0;
  for (std::size_t k = 0; k < map.contrast.size(); ++k) {
    if (map.contrast[k] < map.contrast[best]) best = k;
    n_defined += map.defined[k] ? 1 : 0;
  }
  const std::size_t bt = best / map.m.size(), bm = best % map.m.size();

  json config = common_echo(c);
  config.update({{"grid-theta", gt.str()}, {"grid-m", gm.str()}});
  json results{{"n_theta", gt.count},
               {"n_m", gm.count},
               {"min_contrast", {{"theta", map.theta[bt]}, {"m", map.m[bm]}, {"contrast", map.contrast[best]}}}};
  std::vector<std::pair<std::string, std::string>> files;
  if (c.want_csv()) {
    results["csv"] = "sweep.csv";
    files.emplace_back("sweep.csv", io::phase_map_csv(map));
    files.emplace_back("sweep.gp", io::sweep_gnuplot("sweep.csv", "sweep.png"));
  }
  if (c.want_json_data()) results["map"] = io::to_json(map);
  json diag{{"defined_cells", n_defined}, {"cells", map.contrast.size()}};
  files.emplace_back("sweep.json", io::dump(io::envelope("sweep", config, results, diag, timing_json(c, start))));
  persist(c, files);
  std::cout << line("cells=%.0f min_contrast=%.17g at theta=%.17g m=%.17g\n", static_cast<double>(map.contrast.size()),
                    map.contrast[best], map.theta[bt], map.m[bm]);
  return ok;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  if (trim(text).empty()) return out;
  for (auto part : io::split(text, ',')) {
    const double v = parse_number(trim(std::string(part)), "--also-n");
    if (v < 1 || v != std::floor(v)) exit_with(invalid_config, "--also-n entries must be positive integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

int cmd_transition(const Settings& s, const Common& c) {
  const auto start = std::chrono::steady_clock::now();
  const double tol = s.number("tol", 1e-4);
  if (!(tol >= 1e-6)) exit_with(invalid_config, "--tol must be >= 1e-6");
  std::string also_text = s.string("also-n", "");
  if (also_text.starts_with("[")) {  // JSON array echoed into a config file
    also_text = also_text.substr(1, also_text.size() - 2);
  }
  const std::vector<int> also = parse_int_list(also_text);
  std::optional<double> assert_jump;
  if (s.has("assert-jump")) assert_jump = s.angle("assert-jump");

  auto report = [&](int n) {
    json j = io::to_json(find_critical_strength(n, c.ref_weight, tol));
    j["n_meas"] = n;
    return j;
  };
  const json primary = report(c.n_meas);
  json convergence = json::array();
  for (int n : also) convergence.push_back(report(n));

  json config = common_echo(c);
  config.update({{"tol", tol}, {"also-n", also}});
  if (assert_jump) config["assert-jump"] = *assert_jump;
  const int below = primary["chern_below"].get<int>();
  const int above = primary["chern_above"].get<int>();
  const double jump = primary["jump_at_equator"].get<double>();
  const bool chern_ok = below == 1 && above == 0;
  const bool jump_ok = !assert_jump || std::abs(jump - *assert_jump) <= 0.05;
  json diag{{"chern_ok", chern_ok}, {"jump_ok", jump_ok}};
  json results{{"primary", primary}, {"convergence", convergence}};
  persist(c, {{"transition.json",
               io::dump(io::envelope("transition", config, results, diag, timing_json(c, start)))}});
  std::cout << line("m_star=%.17g gamma_tau_star=%.17g jump=%.17g contrast_min=%.17g\n",
                    primary["m_star"].get<double>(), Strength::from_m(primary["m_star"].get<double>()).gamma_tau(),
                    jump, primary["contrast_min"].get<double>());
  for (const auto& r : convergence) {
    std::cout << "n_meas=" << r["n_meas"].get<int>() << " m_star=" << io::format_double(r["m_star"].get<double>())
              << "\n";
  }
  return chern_ok && jump_ok ? ok : check_failed;
}

// Differences at the level of rounding carry no statistical information.
constexpr double roundoff_floor = 1e-12;

double z_score(double estimate, double reference, double se) {
  const double diff = estimate - reference;
  if (std::abs(diff) <= roundoff_floor) return 0.0;
  return se > 0.0 ? diff / se : std::copysign(std::numeric_limits<double>::infinity(), diff);
}

int cmd_mc(const Settings& s, const Common& c) {
  const auto start = std::chrono::steady_clock::now();
  const double theta = s.angle("theta");
  const bool projective = s.boolean("projective");
  const Strength strength = resolve_strength(s, projective);
  const std::uint64_t samples = s.unsigned_integer("samples", 100000);
  const std::uint64_t seed = s.unsigned_integer("seed", 42);
  if (samples < min_mc_samples) {
    exit_with(insufficient_statistics, "--samples must be at least " + std::to_string(min_mc_samples));
  }
  const ProtocolSpec spec = ProtocolSpec::make(theta, strength, c.n_meas, c.ref_weight);
  const InterferenceResult analytic = run_protocol(spec).result;
  const InterferenceResult mc = mc_interference(spec, McConfig{samples, seed, 0});
  const double z_re = z_score(mc.amplitude.real(), analytic.amplitude.real(), *mc.stderr_re);
  const double z_im = z_score(mc.amplitude.imag(), analytic.amplitude.imag(), *mc.stderr_im);
  const bool pass = std::abs(z_re) <= 3.0 && std::abs(z_im) <= 3.0;

  json config = common_echo(c);
  config.update({{"theta", theta}, {"m", strength.m()}, {"projective", projective}, {"samples", samples},
                 {"seed", seed}});
  json results{{"analytic", io::to_json(analytic)},
               {"monte_carlo", io::to_json(mc)},
               {"z_re", io::number(z_re)},
               {"z_im", io::number(z_im)},
               {"samples", samples},
               {"seed", seed}};
  json diag{{"pass", pass}, {"insufficient_statistics", mc.insufficient_statistics}};
  persist(c, {{"mc.json", io::dump(io::envelope("mc", config, results, diag, timing_json(c, start)))}});
  std::cout << line("z_re=%.6g z_im=%.6g contrast=%.17g chi=%.17g\n", z_re, z_im, mc.contrast, mc.phase);
  return pass ? ok : check_failed;
}

int cmd_surface(const Settings& s, const Common& c) {
  const auto start = std::chrono::steady_clock::now();
  const Strength strength = resolve_strength(s, s.boolean("projective"));
  const GridSpec gt = parse_grid(s.string("grid-theta", "0:pi:129"), true, "--grid-theta");
  const int interp = static_cast<int>(s.integer("interp", 8));
  if (interp < 1) exit_with(invalid_config, "--interp must be positive");
  const ProtocolSpec base = ProtocolSpec::make(0.0, strength, c.n_meas, c.ref_weight);
  std::vector<double> grid = gt.values();
  BlochSurface surf;
  try {
    surf = build_surface(base, strength, grid, interp);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::singular_surface) exit_with(singular_surface, e.what());
    throw;
  }

  json config = common_echo(c);
  config.update({{"m", strength.m()}, {"grid-theta", gt.str()}, {"interp", interp}});
  json results{{"degree", surf.degree},
               {"raw_degree", surf.raw_degree},
               {"m", strength.m()},
               {"n_loops", surf.loops.size()},
               {"points_per_loop", surf.loops.front().points.size()}};
  std::vector<std::pair<std::string, std::string>> files;
  if (c.want_csv()) {
    results["csv"] = "surface.csv";
    files.emplace_back("surface.csv", io::surface_csv(surf));
    files.emplace_back("surface.gp", io::surface_gnuplot("surface.csv", "surface.png"));
  }
  if (c.want_json_data()) {
    json loops = json::array();
    for (const auto& loop : surf.loops) {
      json pts = json::array();
      for (const auto& p : loop.points) pts.push_back({p.x(), p.y(), p.z()});
      loops.push_back({{"theta", loop.theta}, {"points", pts}});
    }
    results["loops"] = loops;
  }
  files.emplace_back("surface.json", io::dump(io::envelope("surface", config, results, json::object(),
                                                           timing_json(c, start))));
  persist(c, files);
  std::cout << "degree=" << surf.degree << " raw_degree=" << io::format_double(surf.raw_degree) << "\n";
  return ok;
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::domain: return invalid_config;
    case ErrorKind::singular_surface: return singular_surface;
    case ErrorKind::no_transition: return no_transition;
    default: return check_failed;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weak-measurement geometric phase simulator"};
  app.require_subcommand(1);
  std::map<std::string, Settings> settings;
  std::map<std::string, std::string> config_paths, out_dirs;

  auto add_common = [&](CLI::App* cmd) {
    settings[cmd->get_name()].attach(cmd);
    cmd->add_option("--n-meas", "Number of partial measurements (default 6)");
    cmd->add_option("--ref-weight", "Initial |g> population w (default 0.5)");
    cmd->add_option("--format", "csv | json | both (default both)");
    cmd->add_option("--out", out_dirs[cmd->get_name()], "Output directory (default .)");
    cmd->add_option("--config", config_paths[cmd->get_name()], "JSON run configuration; flags override it");
    cmd->add_flag("--timing", "Record wall time in the envelope (breaks byte-identical reruns)");
  };
  auto add_strength = [](CLI::App* cmd) {
    auto* m = cmd->add_option("--m", "Null-outcome attenuation m = exp(-gamma tau) in [0, 1]");
    auto* g = cmd->add_option("--gamma-tau", "Measurement strength gamma*tau >= 0");
    m->excludes(g);
  };

  auto* phase = app.add_subcommand("phase", "Geometric phase and contrast at one (theta, m)");
  add_common(phase);
  add_strength(phase);
  phase->add_option("--theta", "Polar angle (radians; 'deg' suffix and pi expressions accepted)");
  phase->add_flag("--projective", "Use the projective (m = 0) code path");

  auto* sweep = app.add_subcommand("sweep", "Phase/contrast map over a (theta, m) grid");
  add_common(sweep);
  sweep->add_option("--grid-theta", "A:B:K theta grid (default 0:pi:64)");
  sweep->add_option("--grid-m", "A:B:K strength grid in m (default 0:1:64)");

  auto* transition = app.add_subcommand("transition", "Locate the critical measurement strength");
  add_common(transition);
  transition->add_option("--tol", "Bracket width in m (default 1e-4)");
  transition->add_option("--also-n", "Comma-separated extra n_meas values for a convergence study");
  transition->add_option("--assert-jump", "Fail unless the equatorial phase jump is within 0.05 rad of this value");

  auto* mc = app.add_subcommand("mc", "Monte Carlo trajectories vs the closed form");
  add_common(mc);
  add_strength(mc);
  mc->add_option("--theta", "Polar angle");
  mc->add_option("--samples", "Number of trajectories (default 100000)");
  mc->add_option("--seed", "RNG seed (default 42)");
  mc->add_flag("--projective", "Two-outcome projective sampler (m = 0)");

  auto* surface = app.add_subcommand("surface", "Trajectory surface on the Bloch sphere and its degree");
  add_common(surface);
  add_strength(surface);
  surface->add_option("--grid-theta", "A:B:K theta grid from 0 to pi (default 0:pi:129)");
  surface->add_option("--interp", "Geodesic points per path segment (default 8)");
  surface->add_flag("--projective", "Projective measurements (m = 0)");

  auto* schema = app.add_subcommand("schema", "Print the JSON schema of the result envelope");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n";
    return invalid_config;
  }

  try {
    if (schema->parsed()) {
      std::cout << envelope_schema;
      return ok;
    }
    for (auto* cmd : {phase, sweep, transition, mc, surface}) {
      if (!cmd->parsed()) continue;
      const std::string name = cmd->get_name();
      Settings& s = settings[name];
      if (!config_paths[name].empty()) s.load_config(config_paths[name]);
      const Common c = resolve_common(s, out_dirs[name]);
      if (cmd == phase) return cmd_phase(s, c);
      if (cmd == sweep) return cmd_sweep(s, c);
      if (cmd == transition) return cmd_transition(s, c);
      if (cmd == mc) return cmd_mc(s, c);
      return cmd_surface(s, c);
    }
  } catch (const ExitError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return check_failed;
  }
  return invalid_config;
}
