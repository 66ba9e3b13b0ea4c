#pragma once

// Packaged scenarios for the nanosecond (adiabatic) and picosecond (kicked)
// NOT-gate runs, width sweeps and kick-limit studies.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <future>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qkick/core.hpp"
#include "qkick/observables.hpp"
#include "qkick/propagation.hpp"
#include "qkick/pulses.hpp"
#include "qkick/su2.hpp"

namespace qkick {

enum class InitialLabel { ground, excited, custom };

inline std::string_view to_string(InitialLabel l) {
  switch (l) {
    case InitialLabel::ground: return "0";
    case InitialLabel::excited: return "1";
    case InitialLabel::custom: return "custom";
  }
  return "custom";
}

struct ScenarioConfig {
  QubitParams qubit;
  PulseSpec pulse;
  TimeGrid grid;
  InitialLabel initial_label = InitialLabel::ground;
  QubitState initial = QubitState::ground();
  Method method = Method::magnus2;

  void validate() const {
    qubit.validate();
    pulse.validate();
    grid.validate();
    require(std::abs(initial.norm() - 1.0) <= 1e-9, "scenario initial state must be normalized");
  }
};

inline constexpr double steps_per_carrier_period = 4000.0;
inline constexpr double steps_per_width = 100.0;

/// dt = min(T_carrier / 4000, tau / 100), T_carrier = 2 pi / max(omega_D, omega0).
inline double default_time_step(const QubitParams& qubit, const PulseSpec& pulse) {
  const double fastest = std::max(pulse.carrier_frequency(), qubit.omega0);
  const double period = 2.0 * pi / fastest;
  return std::min(period / steps_per_carrier_period, pulse.width() / steps_per_width);
}

inline constexpr double adiabatic_width = 23e-9;
inline constexpr double kick_window = 10e-12;
inline constexpr double kick_center = 5e-12;
inline constexpr double kick_area = pi / 2.0;

/// Resonant nanosecond Gaussian: tau = 23 ns, t0 = 3 tau, window [0, 6 tau].
inline ScenarioConfig scenario_adiabatic(double area) {
  require(area > 0.0, "scenario_adiabatic: area must be positive");
  ScenarioConfig cfg;
  cfg.qubit = QubitParams::transmon();
  const double t0 = 3.0 * adiabatic_width;
  cfg.pulse = PulseSpec::from_area(area, cfg.qubit, t0, adiabatic_width, cfg.qubit.omega0, true);
  cfg.grid = TimeGrid{0.0, 2.0 * t0, default_time_step(cfg.qubit, cfg.pulse)};
  return cfg;
}

/// Picosecond kick of area pi/2 centered at 5 ps in a 10 ps window.
inline ScenarioConfig scenario_kick(double width, bool carrier_enabled = true) {
  require(width > 0.0, "scenario_kick: width must be positive");
  ScenarioConfig cfg;
  cfg.qubit = QubitParams::transmon();
  cfg.pulse = PulseSpec::from_area(kick_area, cfg.qubit, kick_center, width, cfg.qubit.omega0,
                                   carrier_enabled);
  cfg.grid = TimeGrid{0.0, kick_window, default_time_step(cfg.qubit, cfg.pulse)};
  return cfg;
}

inline Trajectory run(const ScenarioConfig& cfg) {
  cfg.validate();
  return evolve(cfg.initial, cfg.qubit, cfg.pulse, cfg.grid, cfg.method);
}

enum class Regime { diabatic, intermediate, adiabatic };

inline std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::diabatic: return "diabatic";
    case Regime::intermediate: return "intermediate";
    case Regime::adiabatic: return "adiabatic";
  }
  return "intermediate";
}

inline constexpr double diabatic_threshold = 0.1;
inline constexpr double adiabatic_threshold = 10.0;

/// diabatic if omega0 tau < 0.1, adiabatic if omega0 tau > 10.
inline Regime classify_regime(const QubitParams& params, double width) {
  require(width > 0.0, "classify_regime: width must be positive");
  const double x = params.omega0 * width;
  if (x < diabatic_threshold) return Regime::diabatic;
  if (x > adiabatic_threshold) return Regime::adiabatic;
  return Regime::intermediate;
}

struct SweepRow {
  double width = 0.0;
  double fidelity = 0.0;
  double max_coherence = 0.0;
  double final_coherence = 0.0;
  double effective_area = 0.0;
  Regime regime = Regime::intermediate;
  double norm_drift = 0.0;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

/// evolve failure for one sweep row, tagged with the offending width.
class SweepError : public NumericalError {
public:
  SweepError(double width, const std::string& what)
      : NumericalError("width " + std::to_string(width) + " s: " + what), width_(width) {}
  double width() const { return width_; }

private:
  double width_;
};

/// Same scenario with a new width: the pulse area, center, carrier and window
/// carry over; the amplitude and time step are recomputed.
inline ScenarioConfig with_width(const ScenarioConfig& base, double width) {
  require(width > 0.0, "sweep width must be positive");
  if (width == base.pulse.width()) return base;
  ScenarioConfig cfg = base;
  const double area = nominal_area(base.pulse, base.qubit);
  const double amplitude = area > 0.0 ? amplitude_for_area(area, base.qubit, width) : 0.0;
  cfg.pulse = PulseSpec::from_amplitude(amplitude, base.pulse.center(), width,
                                        base.pulse.carrier_frequency(),
                                        base.pulse.carrier_enabled());
  cfg.grid.dt = default_time_step(cfg.qubit, cfg.pulse);
  return cfg;
}

inline SweepRow sweep_row(const ScenarioConfig& cfg) {
  const Trajectory traj = run(cfg);
  const RunSummary s = summarize(traj);
  return {cfg.pulse.width(),
          s.final_fidelity,
          s.max_coherence,
          s.final_coherence,
          effective_kick_area(cfg.pulse, cfg.qubit),
          classify_regime(cfg.qubit, cfg.pulse.width()),
          s.norm_drift};
}

/// One independent run per width. Rows come back in input order; with
/// `parallel` they are computed concurrently, which does not change values.
inline SweepResult sweep_tau(const ScenarioConfig& base, std::span<const double> widths,
                             bool parallel = true) {
  require(!widths.empty(), "sweep_tau: widths must be non-empty");
  for (double w : widths) require(w > 0.0, "sweep_tau: every width must be positive");

  auto one = [&base](double w) {
    try {
      return sweep_row(with_width(base, w));
    } catch (const NumericalError& e) {
      throw SweepError(w, e.what());
    }
  };

  SweepResult result;
  result.rows.reserve(widths.size());
  if (!parallel || widths.size() == 1) {
    for (double w : widths) result.rows.push_back(one(w));
    return result;
  }
  std::vector<std::future<SweepRow>> jobs;
  jobs.reserve(widths.size());
  for (double w : widths) jobs.push_back(std::async(std::launch::async, one, w));
  for (auto& job : jobs) result.rows.push_back(job.get());
  return result;
}

struct KickComparison {
  double width = 0.0;
  double omega0_tau = 0.0;
  double deviation = 0.0;
};

/// Phase-insensitive operator distance between the numerically propagated
/// carrier-off Gaussian kick and free precession + exp(-i area X) + free
/// precession. Window [0, 2 t0] with t0 = max(5 ps, 6 tau).
inline KickComparison kick_vs_analytic(double width, double area,
                                       const QubitParams& params = QubitParams::transmon(),
                                       Method method = Method::magnus2) {
  require(width > 0.0, "kick_vs_analytic: width must be positive");
  require(area >= 0.0, "kick_vs_analytic: area must be non-negative");
  const double t0 = std::max(kick_center, 6.0 * width);
  const double amplitude = area > 0.0 ? amplitude_for_area(area, params, width) : 0.0;
  const PulseSpec pulse = PulseSpec::from_amplitude(amplitude, t0, width, 0.0, false);
  const TimeGrid grid{0.0, 2.0 * t0, default_time_step(params, pulse)};
  const Unitary2 numeric = propagator(params, pulse, grid, method);
  const Unitary2 analytic = kick_reference(area, params, grid.t_start, grid.t_end, t0);
  return {width, params.omega0 * width, phase_insensitive_distance(numeric, analytic)};
}

inline constexpr double doubling_check_width = 0.01e-12;

struct RabiDoubling {
  double kick_population = 0.0;  // numeric, carrier off, tau = 0.01 ps
  double rwa_population = 0.0;   // |<1| R_x(area) |0>|^2
};

inline RabiDoubling rabi_doubling_check(double area) {
  require(area > 0.0 && area < pi, "rabi_doubling_check: area must lie in (0, pi)");
  ScenarioConfig cfg = scenario_kick(doubling_check_width, false);
  cfg.pulse = PulseSpec::from_area(area, cfg.qubit, kick_center, doubling_check_width, 0.0, false);
  const QubitState end = evolve_final(cfg.initial, cfg.qubit, cfg.pulse, cfg.grid, cfg.method);
  const QubitState rwa = rwa_rotation(Axis::x, area).apply(QubitState::ground());
  return {std::norm(end.a1), std::norm(rwa.a1)};
}

}  // namespace qkick
