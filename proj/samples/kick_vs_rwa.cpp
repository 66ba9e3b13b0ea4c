// Same pulse area, two regimes: a 23 ns resonant Gaussian flips the qubit
// at area pi, while a 0.1 ps bare kick needs only pi/2.

#include <cstdio>

#include "qkick/experiments.hpp"
#include "qkick/observables.hpp"

int main() {
  using namespace qkick;

  for (double area : {pi / 2.0, pi}) {
    const Trajectory slow = run(scenario_adiabatic(area));

    ScenarioConfig kick = scenario_kick(0.1e-12, false);
    kick.pulse = PulseSpec::from_area(area, kick.qubit, kick_center, 0.1e-12, 0.0, false);
    const Trajectory fast = run(kick);

    std::printf("area %.4f rad  23 ns: P1 = %.6f   0.1 ps kick: P1 = %.6f\n", area,
                not_gate_fidelity(slow), not_gate_fidelity(fast));
  }

  const RabiDoubling d = rabi_doubling_check(pi / 2.0);
  std::printf("area pi/2: kick P1 = %.6f, RWA prediction = %.6f\n", d.kick_population,
              d.rwa_population);
  return 0;
}
