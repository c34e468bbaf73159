#include "piggybank/qubit.hpp"

#include <cmath>
#include <string>

#include "piggybank/error.hpp"
#include "piggybank/photon_batch.hpp"

namespace piggybank {

Angle::Angle(double radians) {
  double v = std::fmod(radians, kPi);
  if (v < 0.0) v += kPi;
  // fmod of a value just below a multiple of pi can round up to pi itself.
  if (v >= kPi) v = 0.0;
  value_ = v;
}

double circular_distance(Angle a, Angle b) noexcept {
  const double d = std::abs(a.radians() - b.radians());
  return std::min(d, kPi - d);
}

double signed_difference(Angle a, Angle b) noexcept {
  double d = a.radians() - b.radians();
  if (d >= kPi / 2) d -= kPi;
  if (d < -kPi / 2) d += kPi;
  return d;
}

Rotation::Matrix Rotation::matrix() const noexcept {
  const double c = std::cos(radians_);
  const double s = std::sin(radians_);
  return {{{c, -s}, {s, c}}};
}

Rotation operator*(const Rotation& a, const Rotation& b) noexcept {
  return Rotation(a.radians() + b.radians());
}

Rotation adjoint(const Rotation& r) noexcept { return Rotation(-r.radians()); }

Qubit::Qubit(Amplitude amp0, Amplitude amp1) : amp0_(amp0), amp1_(amp1) {
  const double n = norm_squared();
  if (!(std::abs(n - 1.0) <= 1e-9)) {
    throw Error(ErrorCode::InvalidArgument,
                "qubit amplitudes are not normalized (norm^2 = " + std::to_string(n) + ")");
  }
}

double Qubit::norm_squared() const noexcept { return std::norm(amp0_) + std::norm(amp1_); }

Qubit linear_state(Angle a) { return Qubit(std::cos(a.radians()), std::sin(a.radians())); }

Qubit rotate(const Qubit& q, const Rotation& r) noexcept {
  const auto m = r.matrix();
  return Qubit(m[0][0] * q.amp0_ + m[0][1] * q.amp1_, m[1][0] * q.amp0_ + m[1][1] * q.amp1_,
               Qubit::Unchecked{});
}

Angle polarization_angle(const Qubit& q) noexcept {
  return Angle(std::atan2(q.amp1().real(), q.amp0().real()));
}

double aligned_probability(const Qubit& q, Angle basis) noexcept {
  const auto overlap = std::cos(basis.radians()) * q.amp0() + std::sin(basis.radians()) * q.amp1();
  return std::min(1.0, std::norm(overlap));
}

Outcome measure(Qubit&& q, Angle basis, Rng& rng) {
  const double p = aligned_probability(q, basis);
  q = Qubit{};
  return rng.uniform() < p ? Outcome::Aligned : Outcome::Orthogonal;
}

std::string_view to_string(Stage stage) noexcept {
  switch (stage) {
    case Stage::CoverOut: return "cover_out";
    case Stage::CoverReturn: return "cover_return";
    case Stage::Message: return "message";
  }
  return "unknown";
}

PhotonBatch make_batch(Stage origin, const Qubit& state, std::size_t count) {
  PhotonBatch batch{origin, {}};
  batch.photons.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    batch.photons.push_back(Photon{state, static_cast<std::uint32_t>(i)});
  }
  return batch;
}

}  // namespace piggybank
