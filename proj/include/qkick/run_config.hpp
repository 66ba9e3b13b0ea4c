#pragma once

// Flat `key = value` run configuration. Keys carry their unit in the name
// (width_ps, omega0_ghz, ...) and are converted to SI only when a
// ScenarioConfig is built. Unknown keys are rejected.

#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qkick/core.hpp"
#include "qkick/experiments.hpp"
#include "qkick/propagation.hpp"
#include "qkick/pulses.hpp"

namespace qkick {

/// Parse failure tied to a key and, when read from a file, a line number.
class ConfigError : public InvalidArgument {
public:
  ConfigError(std::string key, int line, const std::string& message)
      : InvalidArgument(format(key, line, message)), key_(std::move(key)), line_(line) {}

  const std::string& key() const { return key_; }
  int line() const { return line_; }

private:
  static std::string format(const std::string& key, int line, const std::string& message) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!key.empty()) out += key + ": ";
    return out + message;
  }

  std::string key_;
  int line_;
};

enum class ScenarioKind { adiabatic, kick, custom };
enum class Frame { lab, rotating };

inline std::string_view to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::adiabatic: return "adiabatic";
    case ScenarioKind::kick: return "kick";
    case ScenarioKind::custom: return "custom";
  }
  return "custom";
}

inline std::string_view to_string(Frame f) { return f == Frame::lab ? "lab" : "rotating"; }

struct RunConfig {
  ScenarioKind scenario = ScenarioKind::kick;
  double omega0_ghz = 4.5;        // omega0 / 2 pi
  double dipole_cm = defaults::dipole_moment;
  double carrier_ghz = 4.5;       // omega_D / 2 pi
  bool carrier = true;
  double width_ps = 0.1;
  double center_ps = 5.0;
  std::optional<double> area_rad = kick_area;
  std::optional<double> amplitude_v_per_m;
  double t_start_ps = 0.0;
  double t_end_ps = 10.0;
  double dt_ps = 0.0;             // 0 selects the default step
  InitialLabel initial = InitialLabel::ground;
  double initial_a0_re = 1.0, initial_a0_im = 0.0;
  double initial_a1_re = 0.0, initial_a1_im = 0.0;
  Method method = Method::magnus2;
  double effective_length_um = 20.0;
  int stride = 0;                 // 0 selects the default stride
  Frame frame = Frame::lab;
  double frame_ghz = 0.0;         // 0 follows omega0
  std::optional<std::vector<double>> widths_ps;
  std::string trajectory_csv = "trajectory.csv";
  std::string summary_json = "summary.json";
  std::string table_csv = "table.csv";

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

namespace config_detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

inline double parse_number(std::string_view text) {
  const std::string t = trim(text);
  double value = 0.0;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw InvalidArgument("expected a number, got '" + t + "'");
  }
  return value;
}

// Accepts plain numbers and the forms pi, k*pi, pi/n, k*pi/n.
inline double parse_angle(std::string_view text) {
  const std::string t = trim(text);
  const auto p = t.find("pi");
  if (p == std::string::npos) return parse_number(t);
  double value = pi;
  const std::string head = trim(std::string_view(t).substr(0, p));
  std::string tail = trim(std::string_view(t).substr(p + 2));
  if (!head.empty()) {
    if (head.back() != '*') throw InvalidArgument("malformed angle '" + t + "'");
    value *= parse_number(std::string_view(head).substr(0, head.size() - 1));
  }
  if (!tail.empty()) {
    if (tail.front() != '/') throw InvalidArgument("malformed angle '" + t + "'");
    const double d = parse_number(std::string_view(tail).substr(1));
    if (d == 0.0) throw InvalidArgument("division by zero in '" + t + "'");
    value /= d;
  }
  return value;
}

inline bool parse_switch(std::string_view text) {
  const std::string t = trim(text);
  if (t == "on" || t == "true" || t == "1") return true;
  if (t == "off" || t == "false" || t == "0") return false;
  throw InvalidArgument("expected on or off, got '" + t + "'");
}

inline std::vector<double> parse_list(std::string_view text) {
  std::vector<double> out;
  const std::string t = trim(text);
  if (t.empty()) return out;
  std::size_t pos = 0;
  while (pos <= t.size()) {
    const auto comma = t.find(',', pos);
    const auto piece = std::string_view(t).substr(pos, comma == std::string::npos ? std::string::npos
                                                                                : comma - pos);
    out.push_back(parse_number(piece));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

using qkick::format_number;

inline double positive(double v) {
  if (!(v > 0.0)) throw InvalidArgument("must be positive");
  return v;
}

inline double non_negative(double v) {
  if (!(v >= 0.0)) throw InvalidArgument("must be non-negative");
  return v;
}

}  // namespace config_detail

/// Named presets. Each sets the scenario kind, area and width; the carrier
/// switch is left alone so the caller's default applies.
inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"fig1-pi", "fig1-pihalf", "fig2-0.1ps",
                                              "fig2-0.5ps", "fig2-1ps"};
  return names;
}

inline void set_scenario_defaults(RunConfig& cfg, ScenarioKind kind) {
  cfg.scenario = kind;
  if (kind == ScenarioKind::adiabatic) {
    cfg.width_ps = 23000.0;
    cfg.center_ps = 3.0 * cfg.width_ps;
    cfg.t_start_ps = 0.0;
    cfg.t_end_ps = 6.0 * cfg.width_ps;
    cfg.area_rad = pi;
    cfg.amplitude_v_per_m.reset();
  } else {
    cfg.width_ps = 0.1;
    cfg.center_ps = 5.0;
    cfg.t_start_ps = 0.0;
    cfg.t_end_ps = 10.0;
    cfg.area_rad = kick_area;
    cfg.amplitude_v_per_m.reset();
  }
}

inline void apply_preset(RunConfig& cfg, std::string_view name) {
  if (name == "fig1-pi" || name == "fig1-pihalf") {
    set_scenario_defaults(cfg, ScenarioKind::adiabatic);
    cfg.area_rad = name == "fig1-pi" ? pi : pi / 2.0;
    return;
  }
  double width = 0.0;
  if (name == "fig2-0.1ps") width = 0.1;
  else if (name == "fig2-0.5ps") width = 0.5;
  else if (name == "fig2-1ps") width = 1.0;
  else throw ConfigError("preset", 0, "unknown preset '" + std::string(name) + "'");
  set_scenario_defaults(cfg, ScenarioKind::kick);
  cfg.width_ps = width;
}

/// Applies `key = value` pairs from `in` on top of `cfg`. A `scenario` key
/// resets the scenario defaults first, wherever it appears. For adiabatic
/// scenarios center_ps and t_end_ps follow width_ps (3 tau, 6 tau) unless set.
inline void apply_config(RunConfig& cfg, std::istream& in) {
  using namespace config_detail;
  struct Entry {
    std::string value;
    int line;
  };
  std::vector<std::pair<std::string, Entry>> entries;
  std::map<std::string, int> seen;

  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(std::string_view(raw).substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("", line_no, "expected 'key = value', got '" + line + "'");
    }
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ConfigError("", line_no, "missing key");
    if (auto it = seen.find(key); it != seen.end()) {
      throw ConfigError(key, line_no, "duplicate key (first on line " +
                                          std::to_string(it->second) + ")");
    }
    seen.emplace(key, line_no);
    entries.push_back({std::move(key), Entry{std::move(value), line_no}});
  }

  if (seen.contains("area_rad") && seen.contains("amplitude_v_per_m")) {
    throw ConfigError("amplitude_v_per_m", seen["amplitude_v_per_m"],
                      "area_rad and amplitude_v_per_m are mutually exclusive");
  }

  // scenario first so its defaults sit underneath everything else
  for (const auto& [key, e] : entries) {
    if (key != "scenario") continue;
    if (e.value == "adiabatic") set_scenario_defaults(cfg, ScenarioKind::adiabatic);
    else if (e.value == "kick") set_scenario_defaults(cfg, ScenarioKind::kick);
    else if (e.value == "custom") cfg.scenario = ScenarioKind::custom;
    else throw ConfigError(key, e.line, "expected adiabatic, kick or custom");
  }

  for (const auto& [key, e] : entries) {
    const std::string& v = e.value;
    try {
      if (key == "scenario") continue;
      else if (key == "omega0_ghz") cfg.omega0_ghz = positive(parse_number(v));
      else if (key == "dipole_cm") cfg.dipole_cm = positive(parse_number(v));
      else if (key == "carrier_ghz") cfg.carrier_ghz = non_negative(parse_number(v));
      else if (key == "carrier") cfg.carrier = parse_switch(v);
      else if (key == "width_ps") cfg.width_ps = positive(parse_number(v));
      else if (key == "center_ps") cfg.center_ps = parse_number(v);
      else if (key == "area_rad") {
        cfg.area_rad = non_negative(parse_angle(v));
        cfg.amplitude_v_per_m.reset();
      } else if (key == "amplitude_v_per_m") {
        cfg.amplitude_v_per_m = non_negative(parse_number(v));
        cfg.area_rad.reset();
      } else if (key == "t_start_ps") cfg.t_start_ps = parse_number(v);
      else if (key == "t_end_ps") cfg.t_end_ps = parse_number(v);
      else if (key == "dt_ps") cfg.dt_ps = v == "auto" ? 0.0 : non_negative(parse_number(v));
      else if (key == "initial") {
        if (v == "0") cfg.initial = InitialLabel::ground;
        else if (v == "1") cfg.initial = InitialLabel::excited;
        else if (v == "custom") cfg.initial = InitialLabel::custom;
        else throw InvalidArgument("expected 0, 1 or custom");
      } else if (key == "initial_a0_re") cfg.initial_a0_re = parse_number(v);
      else if (key == "initial_a0_im") cfg.initial_a0_im = parse_number(v);
      else if (key == "initial_a1_re") cfg.initial_a1_re = parse_number(v);
      else if (key == "initial_a1_im") cfg.initial_a1_im = parse_number(v);
      else if (key == "method") cfg.method = parse_method(v);
      else if (key == "effective_length_um") cfg.effective_length_um = positive(parse_number(v));
      else if (key == "stride") {
        const double s = v == "auto" ? 0.0 : non_negative(parse_number(v));
        if (s != std::floor(s) || s > 1e9) throw InvalidArgument("must be a whole number");
        cfg.stride = static_cast<int>(s);
      } else if (key == "frame") {
        if (v == "lab") cfg.frame = Frame::lab;
        else if (v == "rotating") cfg.frame = Frame::rotating;
        else throw InvalidArgument("expected lab or rotating");
      } else if (key == "frame_ghz") cfg.frame_ghz = non_negative(parse_number(v));
      else if (key == "widths_ps") {
        auto widths = parse_list(v);
        for (double w : widths) positive(w);
        cfg.widths_ps = std::move(widths);
      } else if (key == "trajectory_csv") cfg.trajectory_csv = v;
      else if (key == "summary_json") cfg.summary_json = v;
      else if (key == "table_csv") cfg.table_csv = v;
      else throw InvalidArgument("unknown key");
    } catch (const ConfigError&) {
      throw;
    } catch (const InvalidArgument& ex) {
      throw ConfigError(key, e.line, ex.what());
    }
  }

  if (cfg.scenario == ScenarioKind::adiabatic && seen.contains("width_ps")) {
    if (!seen.contains("center_ps")) cfg.center_ps = 3.0 * cfg.width_ps;
    if (!seen.contains("t_end_ps")) cfg.t_end_ps = 6.0 * cfg.width_ps;
  }
}

inline void apply_config_text(RunConfig& cfg, std::string_view text) {
  std::istringstream in{std::string(text)};
  apply_config(cfg, in);
}

/// Writes every field; feeding the output back through apply_config on a
/// default RunConfig reproduces `cfg` exactly.
inline void dump_config(const RunConfig& cfg, std::ostream& out) {
  using config_detail::format_number;
  out << "scenario = " << to_string(cfg.scenario) << '\n'
      << "omega0_ghz = " << format_number(cfg.omega0_ghz) << '\n'
      << "dipole_cm = " << format_number(cfg.dipole_cm) << '\n'
      << "carrier_ghz = " << format_number(cfg.carrier_ghz) << '\n'
      << "carrier = " << (cfg.carrier ? "on" : "off") << '\n'
      << "width_ps = " << format_number(cfg.width_ps) << '\n'
      << "center_ps = " << format_number(cfg.center_ps) << '\n';
  if (cfg.area_rad) out << "area_rad = " << format_number(*cfg.area_rad) << '\n';
  if (cfg.amplitude_v_per_m) {
    out << "amplitude_v_per_m = " << format_number(*cfg.amplitude_v_per_m) << '\n';
  }
  out << "t_start_ps = " << format_number(cfg.t_start_ps) << '\n'
      << "t_end_ps = " << format_number(cfg.t_end_ps) << '\n'
      << "dt_ps = " << format_number(cfg.dt_ps) << '\n'
      << "initial = " << to_string(cfg.initial) << '\n'
      << "initial_a0_re = " << format_number(cfg.initial_a0_re) << '\n'
      << "initial_a0_im = " << format_number(cfg.initial_a0_im) << '\n'
      << "initial_a1_re = " << format_number(cfg.initial_a1_re) << '\n'
      << "initial_a1_im = " << format_number(cfg.initial_a1_im) << '\n'
      << "method = " << to_string(cfg.method) << '\n'
      << "effective_length_um = " << format_number(cfg.effective_length_um) << '\n'
      << "stride = " << cfg.stride << '\n'
      << "frame = " << to_string(cfg.frame) << '\n'
      << "frame_ghz = " << format_number(cfg.frame_ghz) << '\n';
  if (cfg.widths_ps) {
    out << "widths_ps = ";
    for (std::size_t i = 0; i < cfg.widths_ps->size(); ++i) {
      if (i) out << ',';
      out << format_number((*cfg.widths_ps)[i]);
    }
    out << '\n';
  }
  out << "trajectory_csv = " << cfg.trajectory_csv << '\n'
      << "summary_json = " << cfg.summary_json << '\n'
      << "table_csv = " << cfg.table_csv << '\n';
}

inline QubitParams qubit_params(const RunConfig& cfg) {
  return {2.0 * pi * cfg.omega0_ghz * 1e9, cfg.dipole_cm};
}

inline DeviceGeometry device_geometry(const RunConfig& cfg) {
  return {cfg.effective_length_um / 1e6};
}

inline double frame_frequency(const RunConfig& cfg) {
  const double ghz = cfg.frame_ghz > 0.0 ? cfg.frame_ghz : cfg.omega0_ghz;
  return 2.0 * pi * ghz * 1e9;
}

inline PulseSpec pulse_spec(const RunConfig& cfg, const QubitParams& qubit) {
  const double width = cfg.width_ps / 1e12;
  const double center = cfg.center_ps / 1e12;
  const double carrier = 2.0 * pi * cfg.carrier_ghz * 1e9;
  double amplitude = 0.0;
  if (cfg.amplitude_v_per_m) {
    amplitude = *cfg.amplitude_v_per_m;
  } else if (cfg.area_rad && *cfg.area_rad > 0.0) {
    amplitude = amplitude_for_area(*cfg.area_rad, qubit, width);
  }
  return PulseSpec::from_amplitude(amplitude, center, width, carrier, cfg.carrier);
}

/// Converts to SI and validates; violations are reported against the key
/// that carries the offending value.
inline ScenarioConfig to_scenario(const RunConfig& cfg) {
  if (!(cfg.width_ps > 0.0)) throw ConfigError("width_ps", 0, "must be positive");
  if (!(cfg.t_end_ps > cfg.t_start_ps)) throw ConfigError("t_end_ps", 0, "must exceed t_start_ps");
  if (!(cfg.omega0_ghz > 0.0)) throw ConfigError("omega0_ghz", 0, "must be positive");
  if (!(cfg.dipole_cm > 0.0)) throw ConfigError("dipole_cm", 0, "must be positive");

  ScenarioConfig sc;
  sc.qubit = qubit_params(cfg);
  sc.pulse = pulse_spec(cfg, sc.qubit);
  const double dt = cfg.dt_ps > 0.0 ? cfg.dt_ps / 1e12 : default_time_step(sc.qubit, sc.pulse);
  sc.grid = TimeGrid{cfg.t_start_ps / 1e12, cfg.t_end_ps / 1e12, dt};
  try {
    sc.grid.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError("dt_ps", 0, e.what());
  }
  sc.method = cfg.method;
  sc.initial_label = cfg.initial;
  switch (cfg.initial) {
    case InitialLabel::ground: sc.initial = QubitState::ground(); break;
    case InitialLabel::excited: sc.initial = QubitState::excited(); break;
    case InitialLabel::custom: {
      sc.initial = {complex{cfg.initial_a0_re, cfg.initial_a0_im},
                    complex{cfg.initial_a1_re, cfg.initial_a1_im}};
      if (std::abs(sc.initial.norm() - 1.0) > 1e-9) {
        throw ConfigError("initial_a0_re", 0, "custom initial amplitudes must be normalized");
      }
      break;
    }
  }
  return sc;
}

}  // namespace qkick
