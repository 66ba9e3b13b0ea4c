// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qkick/experiments.hpp"
#include "qkick/observables.hpp"
#include "qkick/run_config.hpp"
#include "test_util.hpp"

using namespace qkick;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] C%d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  if (!ok) ++failures;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

ScenarioConfig preset_scenario(const std::string& name) {
  RunConfig cfg;
  apply_preset(cfg, name);
  return to_scenario(cfg);
}

const char* kick_presets[] = {"fig2-0.1ps", "fig2-0.5ps", "fig2-1ps"};

void rabi_peak() {
  const ScenarioConfig sc = preset_scenario("fig1-pi");
  const double mhz = peak_rabi_frequency(sc.pulse, sc.qubit) / (2 * pi) / 1e6;
  report(1, "peak Rabi frequency", std::abs(mhz - 12.3) <= 0.1, fmt(mhz) + " MHz (12.3 +- 0.1)");
}

void adiabatic_not() {
  const RunSummary full = summarize(run(preset_scenario("fig1-pi")));
  const RunSummary half = summarize(run(preset_scenario("fig1-pihalf")));
  const bool ok = full.final_sigma_z < -0.99 && full.final_fidelity > 0.99 &&
                  std::abs(half.final_sigma_z) < 0.02 && half.final_coherence > 0.98;
  report(2, "nanosecond NOT", ok,
         "pi: sz " + fmt(full.final_sigma_z) + " F " + fmt(full.final_fidelity) + "; pi/2: sz " +
             fmt(half.final_sigma_z) + " C " + fmt(half.final_coherence));
}

void kick_fidelities() {
  const double target[] = {0.9995, 0.9992, 0.9986};
  bool ok = true;
  std::string detail;
  double last = 2.0;
  for (int i = 0; i < 3; ++i) {
    const double f = summarize(run(preset_scenario(kick_presets[i]))).final_fidelity;
    ok = ok && std::abs(f - target[i]) <= 0.002 && f < last;
    last = f;
    detail += std::string(kick_presets[i]) + " " + fmt(f) + " (" + fmt(target[i]) + ") ";
  }
  report(3, "picosecond kick fidelities", ok, detail + "+-0.002, decreasing");
}

void coherence() {
  bool ok = true;
  std::string detail;
  std::vector<double> residual;
  for (const char* name : kick_presets) {
    const ScenarioConfig sc = preset_scenario(name);
    const Trajectory tr = run(sc);
    const RunSummary s = summarize(tr);
    // coherence at the pulse center versus before it
    const std::size_t mid = static_cast<std::size_t>((sc.pulse.center() - sc.grid.t_start) / sc.grid.step());
    const bool rises = l1_coherence(tr.states[mid]) > 0.5 && l1_coherence(tr.states[0]) < 1e-12;
    ok = ok && rises && s.final_coherence < 0.05;
    residual.push_back(s.final_coherence);
    detail += std::string(name) + " peak " + fmt(s.max_coherence) + " end " + fmt(s.final_coherence) + "; ";
  }
  ok = ok && residual[0] < residual[1] && residual[0] < residual[2];
  report(4, "coherence rise and decay", ok, detail + "end < 0.05, 0.1 ps smallest");
}

void kick_limit() {
  bool ok = true;
  std::string detail;
  double last = 1e9, at_smallest = 0.0;
  for (double w : {10e-12, 3e-12, 1e-12, 0.3e-12, 0.1e-12}) {
    const KickComparison c = kick_vs_analytic(w, pi / 2);
    ok = ok && c.deviation < last;
    last = at_smallest = c.deviation;
    detail += fmt(w * 1e12) + " ps " + fmt(c.deviation) + "; ";
  }
  ok = ok && at_smallest <= 1e-3;
  report(5, "kick-limit convergence", ok, detail + "monotone, <= 1e-3 at 0.1 ps");
}

void doubling() {
  const RabiDoubling r = rabi_doubling_check(pi / 2);
  const bool ok = r.kick_population >= 0.999 && std::abs(r.rwa_population - 0.5) <= 1e-12;
  report(6, "Rabi doubling", ok,
         "kick P1 " + fmt(r.kick_population) + " (>= 0.999), RWA " + fmt(r.rwa_population));
}

double order(const ScenarioConfig& sc, Method m, const QubitState& ref) {
  const double period = 2 * pi / sc.qubit.omega0;
  std::vector<double> dts, errs;
  for (double div : {200.0, 400.0, 800.0}) {
    TimeGrid g = sc.grid;
    g.dt = period / div;
    dts.push_back(g.step());
    errs.push_back(distance(evolve_final(sc.initial, sc.qubit, sc.pulse, g, m), ref));
  }
  return testing::loglog_slope(dts, errs);
}

void hygiene() {
  double worst_drift = 0.0, worst_gap = 0.0;
  for (const std::string& name : preset_names()) {
    const ScenarioConfig sc = preset_scenario(name);
    const Trajectory m = evolve(sc.initial, sc.qubit, sc.pulse, sc.grid, Method::magnus2);
    const QubitState r = evolve_final(sc.initial, sc.qubit, sc.pulse, sc.grid, Method::rk4);
    worst_drift = std::max(worst_drift, m.max_norm_drift);
    worst_gap = std::max(worst_gap, distance(m.final_state(), r));
  }
  const ScenarioConfig sc = preset_scenario("fig1-pi");
  TimeGrid fine = sc.grid;
  fine.dt = 2 * pi / sc.qubit.omega0 / 3200;
  const QubitState ref = evolve_final(sc.initial, sc.qubit, sc.pulse, fine, Method::rk4);
  const double p_rk4 = order(sc, Method::rk4, ref);
  const double p_m2 = order(sc, Method::magnus2, ref);
  const bool ok = worst_drift < 1e-9 && worst_gap < 1e-6 && std::abs(p_rk4 - 4) <= 0.3 &&
                  std::abs(p_m2 - 2) <= 0.2;
  report(7, "numerical hygiene", ok,
         "drift " + fmt(worst_drift) + ", magnus2-rk4 " + fmt(worst_gap) + ", order rk4 " +
             fmt(p_rk4) + " magnus2 " + fmt(p_m2));
}

void voltages() {
  const QubitParams q = QubitParams::transmon();
  const DeviceGeometry geo;
  const double v = peak_voltage_pi(q, 23e-9, geo);
  const double chain = field_to_voltage(amplitude_for_area(pi, q, 23e-9), geo);
  const double ratio = 54.2e-6 / v;
  bool ok = std::abs(v / 5.1e-7 - 1) <= 0.02 && std::abs(chain / v - 1) <= 1e-12 &&
            std::abs(ratio - 100) <= 10;
  std::string detail = "V_pi " + fmt(v) + " V (5.1e-7 +- 2%), chain rel " +
                       fmt(std::abs(chain / v - 1)) + ", 54.2 uV / V_pi " + fmt(ratio) + " (100 +- 10)";
  const double caption[] = {60e-3, 12e-3, 6e-3};
  for (int i = 0; i < 3; ++i) {
    const ScenarioConfig sc = preset_scenario(kick_presets[i]);
    const double mv = field_to_voltage(sc.pulse.amplitude(), geo);
    ok = ok && std::abs(mv / caption[i] - 1) <= 0.1;
    detail += "; " + fmt(mv * 1e3) + " mV";
  }
  report(8, "unit-conversion audit", ok, detail);
}

void properties() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 5000; ++i) {
    const QubitState s = testing::random_state(rng);
    const double z = expect_sigma_z(s), c = l1_coherence(s);
    worst = std::max(worst, std::abs(z * z + c * c - 1));
    worst = std::max(worst, std::abs(bloch_vector(s).norm() - 1));
    const QubitState g = std::polar(1.0, 2 * pi * u(rng)) * s;
    const QubitState r = rotating_frame(s, 1e-9 * u(rng), 2 * pi * 1e10 * u(rng));
    for (const QubitState& t : {g, r}) {
      worst = std::max(worst, std::abs(expect_sigma_z(t) - z));
      worst = std::max(worst, std::abs(l1_coherence(t) - c));
    }
    const BlochPoint a = bloch_vector(s), b = bloch_vector(g);
    worst = std::max({worst, std::abs(a.x - b.x), std::abs(a.y - b.y)});
  }
  report(9, "observable properties", worst <= 1e-9, "worst violation " + fmt(worst) + " over 5000 states");
}

}  // namespace

int main() {
  rabi_peak();
  adiabatic_not();
  kick_fidelities();
  coherence();
  kick_limit();
  doubling();
  hygiene();
  voltages();
  properties();
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
