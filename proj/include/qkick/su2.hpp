#pragma once

#include <cmath>
#include <stdexcept>
#include <string_view>

#include "qkick/core.hpp"

namespace qkick {

enum class Axis { x, y, z };

inline Axis parse_axis(std::string_view s) {
  if (s == "x") return Axis::x;
  if (s == "y") return Axis::y;
  if (s == "z") return Axis::z;
  throw InvalidArgument("unknown rotation axis '" + std::string(s) + "'");
}

/// exp(-i dt (hx X + hy Y + hz Z)) in closed form:
///   cos(theta) I - i sin(theta) (n . sigma),  theta = dt |h|.
/// Fields are angular frequencies (rad/s), dt in seconds.
inline Unitary2 su2_exp(double hx, double hy, double hz, double dt) {
  if (!(dt >= 0.0)) throw InvalidArgument("su2_exp: dt must be non-negative");
  const double h = std::sqrt(hx * hx + hy * hy + hz * hz);
  const double theta = dt * h;
  const double c = std::cos(theta);
  // sin(theta)/|h| without dividing by a vanishing |h|; the series keeps
  // theta -> 0 continuous.
  double s_over_h;
  if (theta < 1e-8) {
    s_over_h = dt * (1.0 - theta * theta / 6.0);
  } else {
    s_over_h = std::sin(theta) / h;
  }
  const double sx = s_over_h * hx;
  const double sy = s_over_h * hy;
  const double sz = s_over_h * hz;
  return Unitary2{Matrix2{complex{c, -sz}, complex{-sy, -sx},
                          complex{sy, -sx}, complex{c, sz}}};
}

/// R_axis(angle) = exp(-i (angle/2) sigma_axis), the rotation the RWA
/// assigns to a pulse of area `angle`.
inline Unitary2 rwa_rotation(Axis axis, double angle) {
  const double half = angle / 2.0;
  switch (axis) {
    case Axis::x: return su2_exp(half, 0.0, 0.0, 1.0);
    case Axis::y: return su2_exp(0.0, half, 0.0, 1.0);
    case Axis::z: return su2_exp(0.0, 0.0, half, 1.0);
  }
  throw std::logic_error("unreachable axis");
}

}  // namespace qkick
