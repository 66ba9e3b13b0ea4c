#pragma once

// Command implementations behind the qkick executable. Each returns the
// process exit code: 0 success, 1 I/O, 2 configuration, 3 numerical failure.

#include <cmath>
#include <exception>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qkick/experiments.hpp"
#include "qkick/observables.hpp"
#include "qkick/output.hpp"
#include "qkick/pulses.hpp"
#include "qkick/run_config.hpp"

namespace qkick {

enum ExitCode : int { exit_ok = 0, exit_io = 1, exit_config = 2, exit_numerical = 3 };

inline constexpr std::size_t stride_threshold_steps = 20000;
inline constexpr std::size_t target_rows = 10000;

inline std::size_t default_stride(std::size_t steps) {
  if (steps <= stride_threshold_steps) return 1;
  return (steps + target_rows - 1) / target_rows;
}

inline const std::vector<double>& default_sweep_widths_ps() {
  static const std::vector<double> w{0.1, 0.5, 1.0};
  return w;
}

inline const std::vector<double>& default_compare_widths_ps() {
  static const std::vector<double> w{10.0, 3.0, 1.0, 0.3, 0.1};
  return w;
}

namespace cmd_detail {

// Maps library exceptions to exit codes and reports them on `err`.
inline int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return exit_io;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_io;
  } catch (const InvalidArgument& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return exit_numerical;
  }
}

inline void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

inline nlohmann::json inputs_json(const RunConfig& cfg, const ScenarioConfig& sc) {
  nlohmann::json j;
  j["scenario"] = std::string(to_string(cfg.scenario));
  j["method"] = std::string(to_string(sc.method));
  j["omega0_rad_per_s"] = sc.qubit.omega0;
  j["dipole_moment_c_m"] = sc.qubit.dipole_moment;
  j["carrier_frequency_rad_per_s"] = sc.pulse.carrier_frequency();
  j["carrier_enabled"] = sc.pulse.carrier_enabled();
  j["amplitude_v_per_m"] = sc.pulse.amplitude();
  j["area_rad"] = nominal_area(sc.pulse, sc.qubit);
  j["center_s"] = sc.pulse.center();
  j["width_s"] = sc.pulse.width();
  j["t_start_s"] = sc.grid.t_start;
  j["t_end_s"] = sc.grid.t_end;
  j["dt_s"] = sc.grid.step();
  j["steps"] = sc.grid.steps();
  j["effective_length_m"] = device_geometry(cfg).effective_length;
  j["initial"] = std::string(to_string(sc.initial_label));
  j["initial_state"] = {{"re_a0", sc.initial.a0.real()}, {"im_a0", sc.initial.a0.imag()},
                        {"re_a1", sc.initial.a1.real()}, {"im_a1", sc.initial.a1.imag()}};
  j["frame"] = std::string(to_string(cfg.frame));
  return j;
}

inline std::vector<double> widths_or(const RunConfig& cfg, const std::vector<double>& fallback) {
  if (!cfg.widths_ps) return fallback;
  if (cfg.widths_ps->empty()) throw ConfigError("widths_ps", 0, "width list is empty");
  return *cfg.widths_ps;
}

inline std::string number(double v) { return config_detail::format_number(v); }

}  // namespace cmd_detail

/// Summary document for one run; `companion` is the same run with the carrier
/// switched the other way (kick scenarios report both fidelities).
inline nlohmann::json summary_json(const RunConfig& cfg, const ScenarioConfig& sc,
                                   const RunSummary& s, const RunSummary* companion) {
  nlohmann::json j;
  j["fidelity"] = s.final_fidelity;
  j["max_coherence"] = s.max_coherence;
  j["final_coherence"] = s.final_coherence;
  j["final_sz"] = s.final_sigma_z;
  j["final_bloch"] = {{"x", s.final_bloch.x}, {"y", s.final_bloch.y}, {"z", s.final_bloch.z}};
  j["norm_drift"] = s.norm_drift;
  j["effective_kick_area"] = effective_kick_area(sc.pulse, sc.qubit);
  j["regime"] = std::string(to_string(classify_regime(sc.qubit, sc.pulse.width())));
  j["omega0_tau"] = sc.qubit.omega0 * sc.pulse.width();
  j["peak_rabi_frequency_hz"] = peak_rabi_frequency(sc.pulse, sc.qubit) / (2.0 * pi);
  j["peak_voltage_v"] = field_to_voltage(sc.pulse.amplitude(), device_geometry(cfg));
  if (companion) {
    const bool on = sc.pulse.carrier_enabled();
    j[on ? "fidelity_carrier_on" : "fidelity_carrier_off"] = s.final_fidelity;
    j[on ? "fidelity_carrier_off" : "fidelity_carrier_on"] = companion->final_fidelity;
  }
  j["inputs"] = cmd_detail::inputs_json(cfg, sc);
  return j;
}

/// Evolves the configured scenario and writes the trajectory CSV and the
/// summary JSON into `out_dir`.
inline int cmd_simulate(const RunConfig& cfg, const std::filesystem::path& out_dir,
                        std::ostream& out, std::ostream& err) {
  return cmd_detail::guarded(err, [&] {
    const ScenarioConfig sc = to_scenario(cfg);
    const Trajectory traj = run(sc);
    const RunSummary s = summarize(traj);

    std::optional<RunSummary> companion;
    if (cfg.scenario == ScenarioKind::kick) {
      ScenarioConfig other = sc;
      other.pulse = sc.pulse.with_carrier(!sc.pulse.carrier_enabled());
      companion = summarize(run(other));
    }

    CsvOptions opts;
    opts.stride = cfg.stride > 0 ? static_cast<std::size_t>(cfg.stride)
                                 : default_stride(sc.grid.steps());
    if (cfg.frame == Frame::rotating) opts.frame_frequency = frame_frequency(cfg);
    std::ostringstream csv;
    write_trajectory_csv(traj, csv, opts);

    const nlohmann::json summary =
        summary_json(cfg, sc, s, companion ? &*companion : nullptr);

    cmd_detail::ensure_dir(out_dir);
    StagedFiles files;
    files.add(out_dir / cfg.trajectory_csv, csv.str());
    files.add(out_dir / cfg.summary_json, summary.dump(2) + "\n");
    files.commit();

    out << "fidelity " << cmd_detail::number(s.final_fidelity) << '\n'
        << "final_sz " << cmd_detail::number(s.final_sigma_z) << '\n'
        << "final_coherence " << cmd_detail::number(s.final_coherence) << '\n'
        << "norm_drift " << cmd_detail::number(s.norm_drift) << '\n';
    return int{exit_ok};
  });
}

inline constexpr const char* sweep_csv_header =
    "width_ps,omega0_tau,fidelity,max_coherence,final_coherence,effective_kick_area,regime,"
    "norm_drift";

/// One row per width, written to `table_csv`.
inline int cmd_sweep(const RunConfig& cfg, const std::filesystem::path& out_dir,
                     std::ostream& out, std::ostream& err) {
  return cmd_detail::guarded(err, [&] {
    const std::vector<double> widths_ps = cmd_detail::widths_or(cfg, default_sweep_widths_ps());
    const ScenarioConfig base = to_scenario(cfg);
    std::vector<double> widths;
    for (double w : widths_ps) widths.push_back(w / 1e12);
    const SweepResult result = sweep_tau(base, widths);

    using cmd_detail::number;
    std::ostringstream csv;
    csv << sweep_csv_header << '\n';
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
      const SweepRow& r = result.rows[i];
      csv << number(widths_ps[i]) << ',' << number(base.qubit.omega0 * r.width) << ','
          << number(r.fidelity) << ',' << number(r.max_coherence) << ','
          << number(r.final_coherence) << ',' << number(r.effective_area) << ','
          << to_string(r.regime) << ',' << number(r.norm_drift) << '\n';
    }

    cmd_detail::ensure_dir(out_dir);
    StagedFiles files;
    files.add(out_dir / cfg.table_csv, csv.str());
    files.commit();
    out << csv.str();
    return int{exit_ok};
  });
}

inline constexpr const char* compare_csv_header = "width_ps,omega0_tau,deviation";

/// Kick-limit comparison rows (width, omega0 tau, deviation). Defined for the
/// bare envelope only, so a config with the carrier on is rejected.
inline int cmd_compare_kick(const RunConfig& cfg, const std::filesystem::path& out_dir,
                            std::ostream& out, std::ostream& err) {
  return cmd_detail::guarded(err, [&] {
    if (cfg.carrier) {
      throw ConfigError("carrier", 0, "compare-kick is defined for carrier off");
    }
    if (cfg.amplitude_v_per_m) {
      throw ConfigError("amplitude_v_per_m", 0, "compare-kick needs area_rad, not an amplitude");
    }
    const std::vector<double> widths_ps = cmd_detail::widths_or(cfg, default_compare_widths_ps());
    const ScenarioConfig sc = to_scenario(cfg);
    const double area = cfg.area_rad.value_or(0.0);

    using cmd_detail::number;
    std::ostringstream csv;
    csv << compare_csv_header << '\n';
    for (double w : widths_ps) {
      const KickComparison c = kick_vs_analytic(w / 1e12, area, sc.qubit, sc.method);
      csv << number(w) << ',' << number(c.omega0_tau) << ',' << number(c.deviation) << '\n';
    }

    cmd_detail::ensure_dir(out_dir);
    StagedFiles files;
    files.add(out_dir / cfg.table_csv, csv.str());
    files.commit();
    out << csv.str();
    return int{exit_ok};
  });
}

/// Prints the drive calibration for the configured width and area.
inline int cmd_calibrate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return cmd_detail::guarded(err, [&] {
    const ScenarioConfig sc = to_scenario(cfg);
    const DeviceGeometry geometry = device_geometry(cfg);
    const double width = sc.pulse.width();
    using cmd_detail::number;
    out << "width_s = " << number(width) << '\n'
        << "area_rad = " << number(nominal_area(sc.pulse, sc.qubit)) << '\n'
        << "amplitude_v_per_m = " << number(sc.pulse.amplitude()) << '\n'
        << "peak_rabi_frequency_mhz = "
        << number(peak_rabi_frequency(sc.pulse, sc.qubit) / (2.0 * pi) / 1e6) << '\n'
        << "peak_voltage_v = " << number(field_to_voltage(sc.pulse.amplitude(), geometry)) << '\n'
        << "pi_pulse_peak_voltage_v = " << number(peak_voltage_pi(sc.qubit, width, geometry))
        << '\n'
        << "effective_kick_area = " << number(effective_kick_area(sc.pulse, sc.qubit)) << '\n'
        << "omega0_tau = " << number(sc.qubit.omega0 * width) << '\n'
        << "regime = " << to_string(classify_regime(sc.qubit, width)) << '\n';
    return int{exit_ok};
  });
}

}  // namespace qkick
