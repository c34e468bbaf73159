#pragma once

#include <array>
#include <complex>
#include <numbers>

#include "piggybank/random.hpp"

namespace piggybank {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kNormTolerance = 1e-12;

/// Linear-polarization angle, canonicalized to [0, pi). States at a and
/// a + pi differ only by a global sign, so they are the same ray.
class Angle {
 public:
  constexpr Angle() = default;
  explicit Angle(double radians);

  double radians() const noexcept { return value_; }

  friend bool operator==(Angle, Angle) = default;

 private:
  double value_ = 0.0;
};

/// Shortest distance between two angles on the period-pi circle, in [0, pi/2].
double circular_distance(Angle a, Angle b) noexcept;

/// Signed difference a - b wrapped to [-pi/2, pi/2).
double signed_difference(Angle a, Angle b) noexcept;

/// Planar rotation R(t) = [[cos t, -sin t], [sin t, cos t]].
///
/// The raw radian value is kept so that R(t) R(-t) is exactly the identity;
/// angle() gives the canonical ray-equivalence class. Two rotations compare
/// equal when their canonical angles match.
class Rotation {
 public:
  using Matrix = std::array<std::array<double, 2>, 2>;

  constexpr Rotation() = default;
  explicit Rotation(double radians) : radians_(radians) {}
  explicit Rotation(Angle a) : radians_(a.radians()) {}

  double radians() const noexcept { return radians_; }
  Angle angle() const { return Angle(radians_); }
  Matrix matrix() const noexcept;

  friend bool operator==(const Rotation& a, const Rotation& b) {
    return a.angle() == b.angle();
  }

 private:
  double radians_ = 0.0;
};

/// Composition R(a) R(b) = R(a + b). Commutative.
Rotation operator*(const Rotation& a, const Rotation& b) noexcept;

Rotation adjoint(const Rotation& r) noexcept;

/// Pure single-photon polarization state amp0|0> + amp1|1>.
class Qubit {
 public:
  using Amplitude = std::complex<double>;

  /// |0>.
  Qubit() = default;
  /// Throws InvalidArgument unless |amp0|^2 + |amp1|^2 is 1 within 1e-9.
  Qubit(Amplitude amp0, Amplitude amp1);

  Amplitude amp0() const noexcept { return amp0_; }
  Amplitude amp1() const noexcept { return amp1_; }
  double norm_squared() const noexcept;

 private:
  struct Unchecked {};
  Qubit(Amplitude amp0, Amplitude amp1, Unchecked) : amp0_(amp0), amp1_(amp1) {}

  friend Qubit rotate(const Qubit&, const Rotation&) noexcept;

  Amplitude amp0_{1.0, 0.0};
  Amplitude amp1_{0.0, 0.0};
};

/// (cos a, sin a).
Qubit linear_state(Angle a);

Qubit rotate(const Qubit& q, const Rotation& r) noexcept;

/// Polarization angle of a real-amplitude state. Only meaningful for the
/// linear states the protocol produces; used for debug output.
Angle polarization_angle(const Qubit& q) noexcept;

enum class Outcome { Aligned, Orthogonal };

/// Probability of an Aligned outcome when q is measured against the basis
/// pair {linear_state(basis), linear_state(basis + pi/2)}.
double aligned_probability(const Qubit& q, Angle basis) noexcept;

/// Born-rule measurement. Takes the photon by rvalue: a measured state is gone.
Outcome measure(Qubit&& q, Angle basis, Rng& rng);

}  // namespace piggybank
