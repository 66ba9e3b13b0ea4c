#pragma once

// Lab-frame evolution under H(t)/hbar = (omega0/2) Z + Omega~(t) X, plus the
// analytic unitaries used as references in the kicked and RWA limits.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qkick/core.hpp"
#include "qkick/pulses.hpp"
#include "qkick/su2.hpp"

namespace qkick {

/// Uniform grid over [t_start, t_end]. The requested dt is shrunk so an
/// integer number of steps lands exactly on t_end.
struct TimeGrid {
  double t_start = 0.0;
  double t_end = 0.0;
  double dt = 0.0;

  void validate() const {
    require(std::isfinite(t_start) && std::isfinite(t_end) && std::isfinite(dt),
            "time grid values must be finite");
    require(t_end > t_start, "time grid t_end must exceed t_start");
    require(dt > 0.0, "time grid dt must be positive");
    require((t_end - t_start) / dt >= 2.0, "time grid must contain at least two steps");
  }

  std::size_t steps() const {
    const double n = (t_end - t_start) / dt;
    // Tolerate dt that divides the span up to rounding.
    return static_cast<std::size_t>(std::ceil(n * (1.0 - 1e-12)));
  }
  double step() const { return (t_end - t_start) / static_cast<double>(steps()); }
  double time_at(std::size_t k) const {
    const std::size_t n = steps();
    if (k >= n) return t_end;
    return t_start + static_cast<double>(k) * step();
  }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

enum class Method { magnus2, rk4 };

inline std::string_view to_string(Method m) {
  return m == Method::magnus2 ? "magnus2" : "rk4";
}

inline Method parse_method(std::string_view s) {
  if (s == "magnus2") return Method::magnus2;
  if (s == "rk4") return Method::rk4;
  throw InvalidArgument("unknown method '" + std::string(s) + "' (expected magnus2 or rk4)");
}

struct Trajectory {
  std::vector<double> times;
  std::vector<QubitState> states;
  Method method = Method::magnus2;
  // max_k | ||psi_k|| - ||psi_0|| |
  double max_norm_drift = 0.0;
  QubitParams qubit;
  PulseSpec pulse;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
  const QubitState& initial() const { return states.front(); }
  const QubitState& final_state() const { return states.back(); }
};

inline constexpr double default_norm_drift_limit = 1e-6;

/// H(t)/hbar in rad/s. Hermitian and traceless by construction.
inline Matrix2 hamiltonian_at(const QubitParams& params, const PulseSpec& spec, double t) {
  const double coupling = drive_at(spec, params, t);
  const double half = params.omega0 / 2.0;
  return Matrix2{half, coupling, coupling, -half};
}

/// One exponential-midpoint step: exp(-i dt H(t + dt/2)/hbar) psi.
inline QubitState step_magnus2(const QubitState& state, const QubitParams& params,
                               const PulseSpec& spec, double t, double dt) {
  const double coupling = drive_at(spec, params, t + dt / 2.0);
  return su2_exp(coupling, 0.0, params.omega0 / 2.0, dt).apply(state);
}

namespace detail {
inline QubitState schrodinger_rhs(const QubitState& s, double coupling, double half_omega0) {
  // d/dt (a0, a1) = -i H/hbar (a0, a1)
  return {-I * (half_omega0 * s.a0 + coupling * s.a1),
          -I * (coupling * s.a0 - half_omega0 * s.a1)};
}
}  // namespace detail

/// Classical fourth-order Runge-Kutta on the amplitude equations. Not
/// norm preserving.
inline QubitState step_rk4(const QubitState& state, const QubitParams& params,
                           const PulseSpec& spec, double t, double dt) {
  const double w = params.omega0 / 2.0;
  const double c0 = drive_at(spec, params, t);
  const double ch = drive_at(spec, params, t + dt / 2.0);
  const double c1 = drive_at(spec, params, t + dt);
  const QubitState k1 = detail::schrodinger_rhs(state, c0, w);
  const QubitState k2 = detail::schrodinger_rhs(state + complex(dt / 2.0) * k1, ch, w);
  const QubitState k3 = detail::schrodinger_rhs(state + complex(dt / 2.0) * k2, ch, w);
  const QubitState k4 = detail::schrodinger_rhs(state + complex(dt) * k3, c1, w);
  const complex f = dt / 6.0;
  return {state.a0 + f * (k1.a0 + 2.0 * k2.a0 + 2.0 * k3.a0 + k4.a0),
          state.a1 + f * (k1.a1 + 2.0 * k2.a1 + 2.0 * k3.a1 + k4.a1)};
}

inline QubitState step(Method method, const QubitState& state, const QubitParams& params,
                       const PulseSpec& spec, double t, double dt) {
  return method == Method::magnus2 ? step_magnus2(state, params, spec, t, dt)
                                   : step_rk4(state, params, spec, t, dt);
}

namespace detail {

// Runs the fixed-step loop and hands every grid sample to `visit(k, t, psi)`.
// Returns the largest norm drift seen. evolve and propagator share this loop
// so propagator columns match evolve bit for bit.
template <typename Visitor>
double integrate(QubitState psi, const QubitParams& params, const PulseSpec& spec,
                 const TimeGrid& grid, Method method, Visitor&& visit) {
  const std::size_t n = grid.steps();
  const double dt = grid.step();
  const double norm0 = psi.norm();
  double max_drift = 0.0;
  visit(std::size_t{0}, grid.t_start, psi);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = grid.time_at(k);
    psi = step(method, psi, params, spec, t, dt);
    max_drift = std::max(max_drift, std::abs(psi.norm() - norm0));
    visit(k + 1, grid.time_at(k + 1), psi);
  }
  return max_drift;
}

inline void check_drift(double final_drift, double limit) {
  if (!(final_drift <= limit)) {
    throw NumericalError("norm drift " + std::to_string(final_drift) + " exceeds limit " +
                         std::to_string(limit) + "; reduce the time step");
  }
}

}  // namespace detail

/// Time-ordered evolution on `grid`, storing every sample. The state is never
/// renormalized; the final norm drift must stay below `drift_limit`.
inline Trajectory evolve(const QubitState& initial, const QubitParams& params,
                         const PulseSpec& spec, const TimeGrid& grid,
                         Method method = Method::magnus2,
                         double drift_limit = default_norm_drift_limit) {
  params.validate();
  spec.validate();
  grid.validate();
  require(std::abs(initial.norm() - 1.0) <= 1e-9, "evolve: initial state must be normalized");

  Trajectory traj;
  traj.method = method;
  traj.qubit = params;
  traj.pulse = spec;
  const std::size_t n = grid.steps();
  traj.times.resize(n + 1);
  traj.states.resize(n + 1);
  traj.max_norm_drift = detail::integrate(
      initial, params, spec, grid, method,
      [&](std::size_t k, double t, const QubitState& psi) {
        traj.times[k] = t;
        traj.states[k] = psi;
      });
  detail::check_drift(std::abs(traj.states.back().norm() - initial.norm()), drift_limit);
  return traj;
}

/// Final state only; same arithmetic as evolve without storing samples.
inline QubitState evolve_final(const QubitState& initial, const QubitParams& params,
                               const PulseSpec& spec, const TimeGrid& grid,
                               Method method = Method::magnus2,
                               double drift_limit = default_norm_drift_limit) {
  params.validate();
  spec.validate();
  grid.validate();
  require(std::abs(initial.norm() - 1.0) <= 1e-9,
          "evolve_final: initial state must be normalized");
  QubitState last = initial;
  detail::integrate(initial, params, spec, grid, method,
                    [&](std::size_t, double, const QubitState& psi) { last = psi; });
  detail::check_drift(std::abs(last.norm() - initial.norm()), drift_limit);
  return last;
}

/// U(t_end, t_start) with columns evolved from |0> and |1>.
inline Unitary2 propagator(const QubitParams& params, const PulseSpec& spec,
                           const TimeGrid& grid, Method method = Method::magnus2,
                           double drift_limit = default_norm_drift_limit) {
  const QubitState c0 = evolve_final(QubitState::ground(), params, spec, grid, method, drift_limit);
  const QubitState c1 = evolve_final(QubitState::excited(), params, spec, grid, method, drift_limit);
  return Unitary2{Matrix2{c0.a0, c1.a0, c0.a1, c1.a1}};
}

/// exp(-i (omega0/2) Z duration)
inline Unitary2 free_precession(const QubitParams& params, double duration) {
  const double phase = params.omega0 * duration / 2.0;
  return Unitary2{Matrix2{std::polar(1.0, -phase), 0.0, 0.0, std::polar(1.0, phase)}};
}

/// exp(-i area X): the unitary across an ideal delta kick of the given area.
inline Unitary2 delta_kick(double area) {
  return Unitary2{Matrix2{std::cos(area), complex{0.0, -std::sin(area)},
                          complex{0.0, -std::sin(area)}, std::cos(area)}};
}

inline QubitState delta_kick_apply(const QubitState& state, double area) {
  return delta_kick(area).apply(state);
}

/// Free precession up to t0, an ideal kick, then free precession to t_end.
/// The carrier-off Gaussian pulse converges to this as omega0 tau -> 0.
inline Unitary2 kick_reference(double area, const QubitParams& params, double t_start,
                               double t_end, double t0) {
  return free_precession(params, t_end - t0) * delta_kick(area) *
         free_precession(params, t0 - t_start);
}

/// Kicked-regime evolution operator in the literature's closed form, for an
/// observation time t after a kick at t0:
///   [ e^{i w t} cos a            -i e^{i w (t - 2 t0)} sin a ]
///   [ -i e^{-i w (t - 2 t0)} sin a       e^{-i w t} cos a   ]
/// Its phase convention differs from kick_reference; only phase-invariant
/// quantities (entry moduli) coincide.
inline Unitary2 kicked_propagator(double area, const QubitParams& params, double t, double t0) {
  const double w = params.omega0;
  const double c = std::cos(area);
  const double s = std::sin(area);
  const complex minus_i{0.0, -1.0};
  return Unitary2{Matrix2{std::polar(1.0, w * t) * c,
                          minus_i * std::polar(1.0, w * (t - 2.0 * t0)) * s,
                          minus_i * std::polar(1.0, -w * (t - 2.0 * t0)) * s,
                          std::polar(1.0, -w * t) * c}};
}

}  // namespace qkick
