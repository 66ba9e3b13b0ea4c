#pragma once

// Gaussian drive envelopes and the conversions between pulse area, peak
// electric field and control voltage. Everything is SI: s, rad/s, V/m, C m, V.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "qkick/core.hpp"

namespace qkick {

struct QubitParams {
  double omega0 = defaults::omega0;                // rad/s
  double dipole_moment = defaults::dipole_moment;  // C m

  static constexpr QubitParams transmon() { return {}; }

  void validate() const {
    require(omega0 > 0.0 && std::isfinite(omega0), "qubit omega0 must be positive");
    require(dipole_moment > 0.0 && std::isfinite(dipole_moment),
            "qubit dipole_moment must be positive");
  }

  friend bool operator==(const QubitParams&, const QubitParams&) = default;
};

struct DeviceGeometry {
  double effective_length = defaults::effective_length;  // m

  void validate() const {
    require(effective_length > 0.0 && std::isfinite(effective_length),
            "effective_length must be positive");
  }

  friend bool operator==(const DeviceGeometry&, const DeviceGeometry&) = default;
};

/// A0 = alpha hbar / (mu sqrt(pi) tau), the peak field whose Rabi-frequency
/// integral equals `area`.
inline double amplitude_for_area(double area, const QubitParams& params, double width) {
  require(area > 0.0, "amplitude_for_area: area must be positive");
  require(width > 0.0, "amplitude_for_area: width must be positive");
  params.validate();
  return area * hbar / (params.dipole_moment * std::sqrt(pi) * width);
}

/// Gaussian envelope A0 exp(-(t - t0)^2 / tau^2) times an optional carrier
/// cos(omega_D t). With the carrier disabled the drive is the bare envelope.
///
/// Built either from a peak field or from a pulse area; the two are
/// exclusive and an area is converted to a field immediately.
class PulseSpec {
public:
  PulseSpec() = default;

  static PulseSpec from_amplitude(double amplitude, double center, double width,
                                  double carrier_frequency, bool carrier_enabled) {
    PulseSpec p;
    p.amplitude_ = amplitude;
    p.center_ = center;
    p.width_ = width;
    p.carrier_frequency_ = carrier_frequency;
    p.carrier_enabled_ = carrier_enabled;
    p.validate();
    return p;
  }

  static PulseSpec from_area(double area, const QubitParams& params, double center,
                             double width, double carrier_frequency, bool carrier_enabled) {
    return from_amplitude(amplitude_for_area(area, params, width), center, width,
                          carrier_frequency, carrier_enabled);
  }

  double amplitude() const { return amplitude_; }
  double center() const { return center_; }
  double width() const { return width_; }
  double carrier_frequency() const { return carrier_frequency_; }
  bool carrier_enabled() const { return carrier_enabled_; }

  PulseSpec with_carrier(bool enabled) const {
    PulseSpec p = *this;
    p.carrier_enabled_ = enabled;
    return p;
  }

  void validate() const {
    require(width_ > 0.0 && std::isfinite(width_), "pulse width must be positive");
    require(amplitude_ >= 0.0 && std::isfinite(amplitude_),
            "pulse amplitude must be non-negative");
    require(carrier_frequency_ >= 0.0 && std::isfinite(carrier_frequency_),
            "pulse carrier_frequency must be non-negative");
    require(std::isfinite(center_), "pulse center must be finite");
  }

  friend bool operator==(const PulseSpec&, const PulseSpec&) = default;

private:
  double amplitude_ = 0.0;          // V/m
  double center_ = 0.0;             // s
  double width_ = 1.0;              // s
  double carrier_frequency_ = 0.0;  // rad/s
  bool carrier_enabled_ = true;
};

inline double envelope_at(const PulseSpec& spec, double t) {
  const double u = (t - spec.center()) / spec.width();
  return spec.amplitude() * std::exp(-u * u);
}

/// Rabi frequency of the envelope, mu E(t) / hbar, without the carrier.
inline double rabi_frequency_at(const PulseSpec& spec, const QubitParams& params, double t) {
  return params.dipole_moment * envelope_at(spec, t) / hbar;
}

inline double peak_rabi_frequency(const PulseSpec& spec, const QubitParams& params) {
  return params.dipole_moment * spec.amplitude() / hbar;
}

/// Instantaneous coupling Omega~(t) = Omega(t) cos(omega_D t), or Omega(t)
/// when the carrier is off.
inline double drive_at(const PulseSpec& spec, const QubitParams& params, double t) {
  const double rabi = rabi_frequency_at(spec, params, t);
  if (!spec.carrier_enabled()) return rabi;
  return rabi * std::cos(spec.carrier_frequency() * t);
}

/// Closed-form area mu A0 sqrt(pi) tau / hbar of the untruncated envelope.
inline double nominal_area(const PulseSpec& spec, const QubitParams& params) {
  return params.dipole_moment * spec.amplitude() * std::sqrt(pi) * spec.width() / hbar;
}

struct AreaEstimate {
  double area = 0.0;
  // Fraction of the full Gaussian integral lying outside the integration range.
  double tail_fraction = 0.0;
  bool truncated = false;
};

struct TimeWindow {
  double start = 0.0;
  double end = 0.0;
};

inline constexpr double area_half_span_widths = 6.0;
inline constexpr double area_truncation_threshold = 1e-6;

/// Pulse area by quadrature of the envelope Rabi frequency over
/// [t0 - 6 tau, t0 + 6 tau], clipped to `window` when one is given.
/// `truncated` is set when the clipped tails exceed 1e-6 of the total.
inline AreaEstimate area_of(const PulseSpec& spec, const QubitParams& params,
                            std::optional<TimeWindow> window = std::nullopt) {
  spec.validate();
  params.validate();
  const double t0 = spec.center();
  const double tau = spec.width();
  double lo = t0 - area_half_span_widths * tau;
  double hi = t0 + area_half_span_widths * tau;
  if (window) {
    require(window->end > window->start, "area_of: window end must exceed start");
    lo = std::max(lo, window->start);
    hi = std::min(hi, window->end);
  }

  AreaEstimate out;
  if (hi > lo) {
    // Composite Simpson; the integrand is smooth and decays like a Gaussian.
    constexpr int panels = 4096;
    const double h = (hi - lo) / panels;
    double sum = rabi_frequency_at(spec, params, lo) + rabi_frequency_at(spec, params, hi);
    for (int k = 1; k < panels; ++k) {
      sum += (k % 2 == 1 ? 4.0 : 2.0) * rabi_frequency_at(spec, params, lo + k * h);
    }
    out.area = sum * h / 3.0;
  }

  // Gaussian mass outside [lo, hi] relative to the full integral.
  const double left = 0.5 * std::erfc((t0 - lo) / tau);
  const double right = 0.5 * std::erfc((hi - t0) / tau);
  out.tail_fraction = hi > lo ? left + right : 1.0;
  out.truncated = out.tail_fraction > area_truncation_threshold;
  return out;
}

/// Carrier-weighted area: integral of Omega(t) cos(omega_D t) over all t,
///   alpha exp(-omega_D^2 tau^2 / 4) cos(omega_D t0).
/// Equals the plain area when the carrier is off.
inline double effective_kick_area(const PulseSpec& spec, const QubitParams& params) {
  const double alpha = nominal_area(spec, params);
  if (!spec.carrier_enabled()) return alpha;
  const double wt = spec.carrier_frequency() * spec.width();
  // + 0.0 turns an underflowed -0 into 0
  return alpha * std::exp(-wt * wt / 4.0) * std::cos(spec.carrier_frequency() * spec.center()) +
         0.0;
}

/// V = E L_eff
inline double field_to_voltage(double field, const DeviceGeometry& geometry) {
  geometry.validate();
  return field * geometry.effective_length;
}

inline double voltage_to_field(double voltage, const DeviceGeometry& geometry) {
  geometry.validate();
  return voltage / geometry.effective_length;
}

/// Peak voltage of a Gaussian pi pulse, sqrt(pi) hbar L_eff / (mu tau).
inline double peak_voltage_pi(const QubitParams& params, double width,
                              const DeviceGeometry& geometry) {
  require(width > 0.0, "peak_voltage_pi: width must be positive");
  params.validate();
  geometry.validate();
  return std::sqrt(pi) * hbar * geometry.effective_length / (params.dipole_moment * width);
}

}  // namespace qkick
