#include <gtest/gtest.h>

#include <cmath>

#include "../oracles.hpp"
#include "piggybank/adversary.hpp"
#include "piggybank/channel.hpp"
#include "piggybank/error.hpp"
#include "piggybank/experiments.hpp"
#include "piggybank/protocol.hpp"

namespace piggybank {
namespace {

SessionConfig small_config() {
  SessionConfig c;
  c.n_cover = 512;
  c.m_message = 5;
  c.grid = AngleGrid(8);
  c.message_bits = {1, 0, 1, 1, 0, 0, 1, 0};
  c.seed = 99;
  return c;
}

void expect_same(const Transcript& a, const Transcript& b) {
  EXPECT_EQ(a.phi, b.phi);
  EXPECT_EQ(a.chi, b.chi);
  EXPECT_EQ(a.theta_index, b.theta_index);
  EXPECT_EQ(a.theta_hat_index, b.theta_hat_index);
  EXPECT_EQ(a.outcome, b.outcome);
  EXPECT_EQ(a.decoded_bits, b.decoded_bits);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(a.legs[i].sent, b.legs[i].sent);
    EXPECT_EQ(a.legs[i].received, b.legs[i].received);
    EXPECT_EQ(a.legs[i].lost, b.legs[i].lost);
  }
}

TEST(Config, Validation) {
  SessionConfig c = small_config();
  EXPECT_NO_THROW(c.validate());
  c.m_message = 0;
  EXPECT_THROW(c.validate(), Error);
  c = small_config();
  c.message_bits.clear();
  EXPECT_THROW(c.validate(), Error);
  c = small_config();
  c.message_bits = {2};
  EXPECT_THROW(c.validate(), Error);
  c = small_config();
  c.loss_rate = 1.0;
  EXPECT_THROW(c.validate(), Error);
  c = small_config();
  c.m_message = 200;  // violates m << n
  EXPECT_THROW(c.validate(), Error);
}

TEST(Stage1, CoverPhotonsAreRotatedCoverState) {
  SessionConfig c = small_config();
  const BobState s{Angle(0.3), Angle(1.2)};
  const auto out = bob_stage1(c, s);
  ASSERT_EQ(out.cover.size(), c.n_cover);
  EXPECT_EQ(out.cover.origin, Stage::CoverOut);
  for (const auto& p : out.cover.photons) {
    EXPECT_LT(circular_distance(polarization_angle(p.state), Angle(1.5)), 1e-12);
  }
}

TEST(Stage2, RotatesCoverAndPreparesMessage) {
  SessionConfig c = small_config();
  const BobState s{Angle(0.3), Angle(1.2)};
  auto out1 = bob_stage1(c, s);
  auto out2 = alice_stage2(std::move(out1.cover), c, std::size_t{3});
  EXPECT_EQ(out2.alice.theta_index, 3u);
  EXPECT_NEAR(out2.alice.theta.radians(), 3 * kPi / 8, 1e-15);
  ASSERT_EQ(out2.cover_return.size(), c.n_cover);
  EXPECT_EQ(out2.cover_return.origin, Stage::CoverReturn);
  for (const auto& p : out2.cover_return.photons) {
    EXPECT_LT(circular_distance(polarization_angle(p.state), Angle(1.5 + 3 * kPi / 8)), 1e-12);
  }
  ASSERT_EQ(out2.message.size(), c.m_message * c.message_bits.size());
  for (const auto& p : out2.message.photons) {
    const std::size_t bit = p.slot / c.m_message;
    const double expected = -3 * kPi / 8 + c.message_bits[bit] * kPi / 2;
    EXPECT_LT(circular_distance(polarization_angle(p.state), Angle(expected)), 1e-12);
  }
}

TEST(Stage2, RejectsWrongOrEmptyBatch) {
  SessionConfig c = small_config();
  PhotonBatch wrong = make_batch(Stage::Message, linear_state(Angle(0.0)), 4);
  try {
    alice_stage2(std::move(wrong), c, std::size_t{0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::WrongStage);
  }
  try {
    alice_stage2(PhotonBatch{}, c, std::size_t{0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyBatch);
  }
}

TEST(Stage3, DecodesWithFixedSecrets) {
  SessionConfig c = small_config();
  c.n_cover = 4096;
  const BobState s{Angle(2.0), Angle(0.7)};
  Rng rng(5);
  auto out2 = alice_stage2(bob_stage1(c, s).cover, c, std::size_t{5});
  const Announced ann{out2.cover_return.size(), out2.message.size()};
  const auto report = bob_stage3(s, std::move(out2.cover_return), std::move(out2.message), c, ann, rng);
  EXPECT_EQ(report.outcome, SessionOutcome::Completed);
  EXPECT_EQ(report.theta_hat_index, 5u);
  EXPECT_EQ(report.decoded_bits, c.message_bits);
}

TEST(Stage3, CorrectSnapGivesExactDecodeWhateverM) {
  // With theta recovered exactly the message photons are eigenstates of the
  // measurement, so even m = 1 decodes every bit.
  SessionConfig c = small_config();
  c.n_cover = 4096;
  c.m_message = 1;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    c.seed = seed;
    const Transcript t = run_session(c);
    ASSERT_FALSE(t.aborted());
    if (t.theta_hat_index == t.theta_index) {
      EXPECT_EQ(t.bit_errors(), 0u) << "seed " << seed;
      for (std::size_t i = 0; i < t.tallies.size(); ++i) {
        const auto& tally = t.tallies[i];
        EXPECT_EQ(c.message_bits[i] ? tally.aligned : tally.orthogonal, 0u);
      }
    }
  }
}

TEST(Stage3, DeficitAborts) {
  SessionConfig c = small_config();
  const BobState s{Angle(0.1), Angle(0.2)};
  Rng rng(6);
  auto out2 = alice_stage2(bob_stage1(c, s).cover, c, std::size_t{1});
  const Announced ann{out2.cover_return.size() + 1, out2.message.size()};
  const auto report = bob_stage3(s, std::move(out2.cover_return), std::move(out2.message), c, ann, rng);
  EXPECT_EQ(report.outcome, SessionOutcome::AbortDetected);
  EXPECT_EQ(report.detected_on, Stage::CoverReturn);
  EXPECT_TRUE(report.decoded_bits.empty());
}

TEST(Session, DeterministicInSeed) {
  SessionConfig c = small_config();
  c.loss_rate = 0.05;
  expect_same(run_session(c), run_session(c));
  SessionConfig d = c;
  d.seed = c.seed + 1;
  EXPECT_NE(run_session(c).phi, run_session(d).phi);
}

TEST(Session, PassiveTapLeavesTranscriptUnchanged) {
  SessionConfig c = small_config();
  c.loss_rate = 0.05;
  Eavesdropper idle(AttackStrategy{}, public_knowledge(c), 7);
  expect_same(run_session(c), run_session(c, &idle));
  EXPECT_EQ(idle.report().total_obtained(), 0u);
}

TEST(Session, PhotonConservation) {
  SessionConfig c = small_config();
  c.loss_rate = 0.1;
  AttackStrategy strat;
  strat.mode = AttackMode::Siphon;
  strat.siphon_counts = {10, 10, 4};
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    c.seed = seed;
    Eavesdropper eve(strat, public_knowledge(c), seed);
    const Transcript t = run_session(c, &eve);
    for (const auto& leg : t.legs) {
      EXPECT_EQ(leg.received + leg.siphoned + leg.lost, leg.sent);
    }
    EXPECT_EQ(t.leg(Stage::CoverOut).sent, c.n_cover);
  }
}

TEST(Session, LosslessNoAttackCompletes) {
  SessionConfig c = small_config();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    c.seed = seed;
    const Transcript t = run_session(c);
    EXPECT_EQ(t.outcome, SessionOutcome::Completed);
    EXPECT_EQ(t.leg(Stage::CoverReturn).received, c.n_cover);
    EXPECT_EQ(t.decoded_bits.size(), c.message_bits.size());
  }
}

TEST(Session, GodViewRecordsLegAngles) {
  SessionConfig c = small_config();
  c.god_view = true;
  const Transcript t = run_session(c);
  ASSERT_EQ(t.god_view.size(), 3u);
  EXPECT_EQ(t.god_view[0].angles.size(), c.n_cover);
  EXPECT_NEAR(t.god_view[0].angles.front(), Angle(t.phi.radians() + t.chi.radians()).radians(), 1e-9);
}

TEST(Session, MoreCoverPhotonsLowerErrorRate) {
  SessionConfig base;
  base.grid = AngleGrid(16);
  base.m_message = 3;
  base.message_bits.assign(8, 0);
  base.n_cover = 64;
  const auto small = bit_error_rate(base, 2000, 1);
  base.n_cover = 4096;
  const auto large = bit_error_rate(base, 2000, 1);
  EXPECT_GT(small.error_rate(), large.error_rate());
}

TEST(Session, EndToEndCommutativity) {
  // Bob undoes R(phi) after Alice applied R(theta): the net rotation on the
  // cover state is theta whatever phi is.
  Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    const Rotation phi(kPi * rng.uniform()), theta(kPi * rng.uniform());
    const Qubit x = linear_state(Angle(kPi * rng.uniform()));
    const Qubit a = rotate(rotate(rotate(x, phi), theta), adjoint(phi));
    const Qubit b = rotate(x, theta);
    EXPECT_LT(std::abs(a.amp0() - b.amp0()), 1e-12);
    EXPECT_LT(std::abs(a.amp1() - b.amp1()), 1e-12);
  }
}

TEST(Channel, LossAccounting) {
  Rng rng(9);
  auto d = transmit(make_batch(Stage::CoverOut, linear_state(Angle(0.0)), 10000), 0.2, nullptr, rng);
  EXPECT_EQ(d.record.sent, 10000u);
  EXPECT_EQ(d.record.received + d.record.lost, 10000u);
  EXPECT_EQ(d.batch.size(), d.record.received);
  EXPECT_NEAR(d.record.lost / 10000.0, 0.2, 0.02);
  for (std::size_t i = 1; i < d.batch.size(); ++i) {
    EXPECT_LT(d.batch.photons[i - 1].slot, d.batch.photons[i].slot);
  }
}

TEST(Channel, DetectionBand) {
  EXPECT_FALSE(detect_leg(1000, 1000, 0.0, 0.99));
  EXPECT_TRUE(detect_leg(1000, 999, 0.0, 0.99));
  EXPECT_FALSE(detect_leg(1000, 950, 0.05, 0.99));
  EXPECT_TRUE(detect_leg(1000, 900, 0.05, 0.99));
  const double floor = detection_floor(1000, 0.05, 0.99);
  EXPECT_NEAR(floor, 950 - 2.3263478740 * std::sqrt(1000 * 0.05 * 0.95), 1e-6);
}

TEST(Channel, FalseAlarmRateNearConfidence) {
  Rng rng(10);
  int alarms = 0;
  const int runs = 2000;
  for (int i = 0; i < runs; ++i) {
    auto d = transmit(make_batch(Stage::CoverOut, linear_state(Angle(0.0)), 1000), 0.05, nullptr, rng);
    alarms += detect_leg(1000, d.record.received, 0.05, 0.99);
  }
  EXPECT_LT(alarms / double(runs), 0.03);
}

}  // namespace
}  // namespace piggybank
