#pragma once

#include <algorithm>
#include <cmath>

#include "qkick/core.hpp"
#include "qkick/propagation.hpp"

namespace qkick {

struct BlochPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

/// <Z> = |a0|^2 - |a1|^2
inline double expect_sigma_z(const QubitState& s) { return std::norm(s.a0) - std::norm(s.a1); }

/// (<X>, <Y>, <Z>) with <X> = 2 Re(a0* a1), <Y> = 2 Im(a0* a1).
inline BlochPoint bloch_vector(const QubitState& s) {
  const complex r = std::conj(s.a0) * s.a1;
  return {2.0 * r.real(), 2.0 * r.imag(), expect_sigma_z(s)};
}

/// C_l1 = 2 |a0| |a1|
inline double l1_coherence(const QubitState& s) { return 2.0 * std::abs(s.a0) * std::abs(s.a1); }

/// |<target|state>|^2
inline double state_fidelity(const QubitState& state, const QubitState& target) {
  const complex overlap = std::conj(target.a0) * state.a0 + std::conj(target.a1) * state.a1;
  return std::min(1.0, std::norm(overlap));
}

/// Population moved to the opposite basis state at the end of the run.
/// The run must start in |0> or |1> (within 1e-9).
inline double not_gate_fidelity(const Trajectory& traj) {
  require(!traj.empty(), "not_gate_fidelity: empty trajectory");
  const QubitState& first = traj.initial();
  const QubitState& last = traj.final_state();
  constexpr double tol = 1e-9;
  if (std::abs(std::norm(first.a0) - 1.0) <= tol && std::norm(first.a1) <= tol) {
    return std::norm(last.a1);
  }
  if (std::abs(std::norm(first.a1) - 1.0) <= tol && std::norm(first.a0) <= tol) {
    return std::norm(last.a0);
  }
  throw InvalidArgument("not_gate_fidelity: trajectory must start in a basis state");
}

/// diag(e^{+i w t/2}, e^{-i w t/2}) psi, undoing free precession at w.
inline QubitState rotating_frame(const QubitState& s, double t, double frame_frequency) {
  const double phase = frame_frequency * t / 2.0;
  return {std::polar(1.0, phase) * s.a0, std::polar(1.0, -phase) * s.a1};
}

struct RunSummary {
  double final_fidelity = 0.0;
  double max_coherence = 0.0;
  double final_coherence = 0.0;
  double final_sigma_z = 0.0;
  BlochPoint final_bloch;
  double norm_drift = 0.0;
};

/// For basis-state starts final_fidelity is not_gate_fidelity; otherwise it
/// is the overlap with X psi(0), which reduces to the same number on a basis.
inline RunSummary summarize(const Trajectory& traj) {
  require(!traj.empty(), "summarize: empty trajectory");
  RunSummary out;
  const QubitState& first = traj.initial();
  const bool basis_start = std::min(std::norm(first.a0), std::norm(first.a1)) <= 1e-9;
  out.final_fidelity =
      basis_start ? not_gate_fidelity(traj)
                  : state_fidelity(traj.final_state(), Matrix2::pauli_x().apply(first));
  for (const QubitState& s : traj.states) {
    out.max_coherence = std::max(out.max_coherence, l1_coherence(s));
  }
  out.final_coherence = l1_coherence(traj.final_state());
  out.final_sigma_z = expect_sigma_z(traj.final_state());
  out.final_bloch = bloch_vector(traj.final_state());
  out.norm_drift = traj.max_norm_drift;
  return out;
}

}  // namespace qkick
