#pragma once

// Constants, error types and the two small value types everything else is
// built on: a qubit state and a 2x2 complex matrix.

#include <array>
#include <charconv>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qkick {

using complex = std::complex<double>;

/// Shortest decimal text that reads back to exactly `v`.
inline std::string format_number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline constexpr double pi = std::numbers::pi;
inline constexpr double hbar = 1.054571817e-34;  // J s
inline constexpr complex I{0.0, 1.0};

// Transmon-like defaults used by the presets.
namespace defaults {
inline constexpr double omega0 = 2.0 * pi * 4.5e9;     // rad/s
inline constexpr double dipole_moment = 3e-25;         // C m
inline constexpr double effective_length = 20e-6;      // m
}  // namespace defaults

// Input violates a documented precondition.
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Integration produced a result outside the accepted numerical envelope.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

/// Pure state a0|0> + a1|1>; |0> is the +1 eigenstate of sigma_z.
struct QubitState {
  complex a0{1.0, 0.0};
  complex a1{0.0, 0.0};

  static constexpr QubitState ground() { return {complex{1.0, 0.0}, complex{0.0, 0.0}}; }
  static constexpr QubitState excited() { return {complex{0.0, 0.0}, complex{1.0, 0.0}}; }

  double norm_squared() const { return std::norm(a0) + std::norm(a1); }
  double norm() const { return std::sqrt(norm_squared()); }

  friend bool operator==(const QubitState&, const QubitState&) = default;
};

inline QubitState operator*(complex c, const QubitState& s) { return {c * s.a0, c * s.a1}; }

inline QubitState operator+(const QubitState& x, const QubitState& y) {
  return {x.a0 + y.a0, x.a1 + y.a1};
}

/// Euclidean distance between amplitude vectors (phase sensitive).
inline double distance(const QubitState& x, const QubitState& y) {
  return std::sqrt(std::norm(x.a0 - y.a0) + std::norm(x.a1 - y.a1));
}

/// Dense 2x2 complex matrix, row major.
struct Matrix2 {
  complex m00{}, m01{}, m10{}, m11{};

  static constexpr Matrix2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Matrix2 pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }
  static constexpr Matrix2 pauli_y() { return {0.0, complex{0.0, -1.0}, complex{0.0, 1.0}, 0.0}; }
  static constexpr Matrix2 pauli_z() { return {1.0, 0.0, 0.0, -1.0}; }

  complex trace() const { return m00 + m11; }
  complex determinant() const { return m00 * m11 - m01 * m10; }

  Matrix2 adjoint() const {
    return {std::conj(m00), std::conj(m10), std::conj(m01), std::conj(m11)};
  }

  QubitState apply(const QubitState& s) const {
    return {m00 * s.a0 + m01 * s.a1, m10 * s.a0 + m11 * s.a1};
  }

  friend bool operator==(const Matrix2&, const Matrix2&) = default;
};

inline Matrix2 operator*(const Matrix2& a, const Matrix2& b) {
  return {a.m00 * b.m00 + a.m01 * b.m10, a.m00 * b.m01 + a.m01 * b.m11,
          a.m10 * b.m00 + a.m11 * b.m10, a.m10 * b.m01 + a.m11 * b.m11};
}

inline Matrix2 operator+(const Matrix2& a, const Matrix2& b) {
  return {a.m00 + b.m00, a.m01 + b.m01, a.m10 + b.m10, a.m11 + b.m11};
}

inline Matrix2 operator-(const Matrix2& a, const Matrix2& b) {
  return {a.m00 - b.m00, a.m01 - b.m01, a.m10 - b.m10, a.m11 - b.m11};
}

inline Matrix2 operator*(complex c, const Matrix2& a) {
  return {c * a.m00, c * a.m01, c * a.m10, c * a.m11};
}

inline QubitState operator*(const Matrix2& m, const QubitState& s) { return m.apply(s); }

/// Largest entrywise modulus.
inline double max_abs(const Matrix2& a) {
  return std::max({std::abs(a.m00), std::abs(a.m01), std::abs(a.m10), std::abs(a.m11)});
}

/// Spectral norm, from the eigenvalues of A^dagger A.
inline double operator_norm(const Matrix2& a) {
  const Matrix2 g = a.adjoint() * a;
  const double tr = g.trace().real();
  const double det = g.determinant().real();
  const double disc = std::max(0.0, tr * tr / 4.0 - det);
  return std::sqrt(std::max(0.0, tr / 2.0 + std::sqrt(disc)));
}

inline bool is_hermitian(const Matrix2& a, double tol = 0.0) {
  return max_abs(a - a.adjoint()) <= tol;
}

/// A 2x2 matrix asserted unitary by whoever built it. Constructors live in
/// su2.hpp and propagation.hpp; this type only marks the promise.
class Unitary2 {
public:
  constexpr Unitary2() : m_(Matrix2::identity()) {}
  explicit constexpr Unitary2(const Matrix2& m) : m_(m) {}

  static constexpr Unitary2 identity() { return Unitary2{}; }

  const Matrix2& matrix() const { return m_; }
  complex operator()(int row, int col) const {
    if (row == 0) return col == 0 ? m_.m00 : m_.m01;
    return col == 0 ? m_.m10 : m_.m11;
  }

  Unitary2 adjoint() const { return Unitary2{m_.adjoint()}; }
  QubitState apply(const QubitState& s) const { return m_.apply(s); }

  /// max |(U^dagger U - I)_ij|
  double unitarity_error() const { return max_abs(m_.adjoint() * m_ - Matrix2::identity()); }

  friend Unitary2 operator*(const Unitary2& a, const Unitary2& b) { return Unitary2{a.m_ * b.m_}; }
  friend QubitState operator*(const Unitary2& u, const QubitState& s) { return u.apply(s); }
  friend bool operator==(const Unitary2&, const Unitary2&) = default;

private:
  Matrix2 m_;
};

/// Operator-norm distance between two unitaries after removing the best
/// scalar phase: min_phi || U - e^{i phi} V ||.
///
/// W = V^dagger U is unitary with eigenphases l1, l2. The distance to
/// e^{i phi} I is max_k |e^{i l_k} - e^{i phi}|, minimized with phi halfway
/// between, giving 2 sin(|l1 - l2| / 4) with the difference wrapped to [0, pi].
inline double phase_insensitive_distance(const Unitary2& u, const Unitary2& v) {
  const Matrix2 w = v.adjoint().matrix() * u.matrix();
  const complex half_tr = w.trace() / 2.0;
  const complex disc = std::sqrt(half_tr * half_tr - w.determinant());
  const complex e1 = half_tr + disc;
  const complex e2 = half_tr - disc;
  const double delta = std::abs(std::arg(e1 * std::conj(e2)));
  return 2.0 * std::sin(delta / 4.0);
}

}  // namespace qkick
