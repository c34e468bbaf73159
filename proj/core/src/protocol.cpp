#include "piggybank/protocol.hpp"

#include <string>

#include "piggybank/error.hpp"

namespace piggybank {

namespace {

LegSnapshot snapshot(const PhotonBatch& batch) {
  LegSnapshot s{batch.origin, {}};
  s.angles.reserve(batch.size());
  for (const auto& p : batch.photons) s.angles.push_back(polarization_angle(p.state).radians());
  return s;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidConfig, what);
}

}  // namespace

void SessionConfig::validate() const {
  require(n_cover >= 2, "n_cover must be >= 2");
  require(m_message >= 1, "m_message must be >= 1");
  require(!message_bits.empty(), "message_bits must be nonempty");
  for (auto b : message_bits) require(b <= 1, "message bits must be 0 or 1");
  require(loss_rate >= 0.0 && loss_rate < 1.0, "loss_rate must lie in [0, 1)");
  require(detection_confidence > 0.5 && detection_confidence < 1.0,
          "detection_confidence must lie in (0.5, 1)");
  require(m_guard_ratio > 0.0, "m_guard_ratio must be positive");
  require(static_cast<double>(m_message) <= static_cast<double>(n_cover) * m_guard_ratio,
          "m_message = " + std::to_string(m_message) + " violates m << n (limit " +
              std::to_string(m_guard_ratio) + " * n_cover)");
}

std::string_view to_string(SessionOutcome outcome) noexcept {
  switch (outcome) {
    case SessionOutcome::Completed: return "completed";
    case SessionOutcome::AbortDetected: return "abort_detected";
    case SessionOutcome::AbortInsufficientPhotons: return "abort_insufficient_photons";
  }
  return "unknown";
}

Stage1Output bob_stage1(const SessionConfig& config, Rng& rng) {
  BobState secrets;
  secrets.phi = Angle(rng.uniform_half_turn());
  secrets.chi = Angle(rng.uniform_half_turn());
  return bob_stage1(config, secrets);
}

Stage1Output bob_stage1(const SessionConfig& config, const BobState& secrets) {
  const Qubit sent = rotate(linear_state(secrets.chi), Rotation(secrets.phi));
  return {secrets, make_batch(Stage::CoverOut, sent, config.n_cover)};
}

Stage2Output alice_stage2(PhotonBatch&& batch, const SessionConfig& config, Rng& rng) {
  return alice_stage2(std::move(batch), config, rng.below(config.grid.size()));
}

Stage2Output alice_stage2(PhotonBatch&& batch, const SessionConfig& config,
                          std::size_t theta_index) {
  if (batch.origin != Stage::CoverOut) {
    throw Error(ErrorCode::WrongStage, "Alice expects a cover-out batch");
  }
  if (batch.empty()) throw Error(ErrorCode::EmptyBatch, "Alice received no cover photons");

  Stage2Output out;
  out.alice.theta_index = theta_index;
  out.alice.theta = config.grid.angle(theta_index);
  const Rotation u_a(out.alice.theta);

  out.cover_return.origin = Stage::CoverReturn;
  out.cover_return.photons = std::move(batch.photons);
  for (auto& p : out.cover_return.photons) p.state = rotate(p.state, u_a);

  out.message.origin = Stage::Message;
  out.message.photons.reserve(config.message_bits.size() * config.m_message);
  const Rotation undo = adjoint(u_a);
  std::uint32_t slot = 0;
  for (const auto bit : config.message_bits) {
    const Angle y(config.message_basis.radians() + (bit ? kPi / 2 : 0.0));
    const Qubit state = rotate(linear_state(y), undo);
    for (std::size_t i = 0; i < config.m_message; ++i) {
      out.message.photons.push_back(Photon{state, slot++});
    }
  }
  return out;
}

BobReport bob_stage3(const BobState& bob, PhotonBatch&& cover_return, PhotonBatch&& message,
                     const SessionConfig& config, const Announced& announced, Rng& rng) {
  BobReport report;
  const auto abort_on = [&](Stage leg) {
    report.outcome = SessionOutcome::AbortDetected;
    report.detected_on = leg;
    return report;
  };
  if (detect_leg(announced.cover_return, cover_return.size(), config.loss_rate,
                 config.detection_confidence)) {
    return abort_on(Stage::CoverReturn);
  }
  if (detect_leg(announced.message, message.size(), config.loss_rate,
                 config.detection_confidence)) {
    return abort_on(Stage::Message);
  }
  if (cover_return.size() < 2) {
    report.outcome = SessionOutcome::AbortInsufficientPhotons;
    return report;
  }

  // U_B^+ leaves copies of R(theta) X = linear_state(chi + theta).
  const Rotation undo_b = adjoint(Rotation(bob.phi));
  for (auto& p : cover_return.photons) p.state = rotate(p.state, undo_b);
  const TomographyResult est = estimate_angle(std::move(cover_return), rng);

  const Angle theta_hat(est.estimate.radians() - bob.chi.radians());
  const std::size_t index = snap_to_grid(theta_hat, config.grid);
  report.theta_hat = theta_hat;
  report.theta_hat_index = index;

  const Rotation u_a_hat(config.grid.angle(index));
  const std::size_t bits = config.message_bits.size();
  report.tallies.assign(bits, BitTally{});
  for (auto& p : message.photons) {
    const std::size_t bit = p.slot / config.m_message;
    if (bit >= bits) continue;
    const Outcome o = measure(rotate(p.state, u_a_hat), config.message_basis, rng);
    if (o == Outcome::Aligned) {
      ++report.tallies[bit].aligned;
    } else {
      ++report.tallies[bit].orthogonal;
    }
  }
  message.photons.clear();

  report.decoded_bits.reserve(bits);
  for (auto& tally : report.tallies) {
    tally.tie = tally.aligned == tally.orthogonal;
    report.decoded_bits.push_back(tally.orthogonal > tally.aligned ? 1 : 0);
  }
  return report;
}

std::size_t Transcript::bit_errors() const {
  std::size_t errors = 0;
  for (std::size_t i = 0; i < decoded_bits.size() && i < config.message_bits.size(); ++i) {
    if (decoded_bits[i] != config.message_bits[i]) ++errors;
  }
  return errors;
}

Transcript run_session(const SessionConfig& config, ChannelTap* tap) {
  config.validate();
  Rng bob_rng(derive_seed(config.seed, kBobStream));
  Rng alice_rng(derive_seed(config.seed, kAliceStream));
  Rng channel_rng(derive_seed(config.seed, kChannelStream));

  Transcript t;
  t.config = config;

  Stage1Output s1 = bob_stage1(config, bob_rng);
  t.phi = s1.bob.phi;
  t.chi = s1.bob.chi;
  if (config.god_view) t.god_view.push_back(snapshot(s1.cover));

  Delivery leg1 = transmit(std::move(s1.cover), config.loss_rate, tap, channel_rng);
  t.legs[0] = leg1.record;
  if (detect_leg(leg1.record.sent, leg1.record.received, config.loss_rate,
                 config.detection_confidence)) {
    t.outcome = SessionOutcome::AbortDetected;
    t.detected_on = Stage::CoverOut;
    return t;
  }
  if (leg1.batch.empty()) {
    t.outcome = SessionOutcome::AbortInsufficientPhotons;
    return t;
  }

  Stage2Output s2 = alice_stage2(std::move(leg1.batch), config, alice_rng);
  t.theta_index = s2.alice.theta_index;
  t.theta = s2.alice.theta;
  if (config.god_view) {
    t.god_view.push_back(snapshot(s2.cover_return));
    t.god_view.push_back(snapshot(s2.message));
  }

  Delivery leg2 = transmit(std::move(s2.cover_return), config.loss_rate, tap, channel_rng);
  Delivery leg3 = transmit(std::move(s2.message), config.loss_rate, tap, channel_rng);
  t.legs[1] = leg2.record;
  t.legs[2] = leg3.record;

  const Announced announced{leg2.record.sent, leg3.record.sent};
  BobReport rep = bob_stage3(s1.bob, std::move(leg2.batch), std::move(leg3.batch), config,
                             announced, bob_rng);
  t.outcome = rep.outcome;
  t.detected_on = rep.detected_on;
  t.theta_hat = rep.theta_hat;
  t.theta_hat_index = rep.theta_hat_index;
  t.decoded_bits = std::move(rep.decoded_bits);
  t.tallies = std::move(rep.tallies);
  return t;
}

}  // namespace piggybank
