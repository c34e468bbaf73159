#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "piggybank/channel.hpp"
#include "piggybank/photon_batch.hpp"
#include "piggybank/qubit.hpp"
#include "piggybank/random.hpp"
#include "piggybank/tomography.hpp"

namespace piggybank {

struct SessionConfig {
  std::size_t n_cover = 4096;
  std::size_t m_message = 3;
  AngleGrid grid{8};
  /// mu: bit 0 is sent as linear_state(mu), bit 1 as linear_state(mu + pi/2).
  Angle message_basis{0.0};
  std::vector<std::uint8_t> message_bits{1};
  std::uint64_t seed = 0;
  /// Per-photon loss probability on every leg.
  double loss_rate = 0.0;
  /// One-sided confidence of the photon-count check.
  double detection_confidence = 0.99;
  /// Guard for m << n: m_message <= n_cover * m_guard_ratio.
  double m_guard_ratio = 0.25;
  /// Record photon states per leg in the transcript.
  bool god_view = false;

  /// Throws InvalidConfig on any violated precondition.
  void validate() const;
};

/// Bob's secrets: rotation phi and cover angle chi (X = linear_state(chi)).
struct BobState {
  Angle phi;
  Angle chi;
};

struct Stage1Output {
  BobState bob;
  PhotonBatch cover;
};

/// Draws phi and chi uniformly in [0, pi) and emits n_cover copies of R(phi) X.
Stage1Output bob_stage1(const SessionConfig& config, Rng& rng);

/// Emits the cover batch for fixed secrets.
Stage1Output bob_stage1(const SessionConfig& config, const BobState& secrets);

struct AliceState {
  std::size_t theta_index = 0;
  Angle theta;
};

struct Stage2Output {
  AliceState alice;
  PhotonBatch cover_return;
  PhotonBatch message;
};

/// Draws theta from the grid, rotates every cover photon by R(theta), and
/// prepares m_message copies of R(theta)^+ linear_state(mu + b pi/2) per bit.
/// Throws WrongStage or EmptyBatch.
Stage2Output alice_stage2(PhotonBatch&& batch, const SessionConfig& config, Rng& rng);

/// Same with a fixed grid index for theta.
Stage2Output alice_stage2(PhotonBatch&& batch, const SessionConfig& config,
                          std::size_t theta_index);

/// Photon counts the sender announces over the classical channel.
struct Announced {
  std::size_t cover_return = 0;
  std::size_t message = 0;
};

enum class SessionOutcome { Completed, AbortDetected, AbortInsufficientPhotons };

std::string_view to_string(SessionOutcome outcome) noexcept;

struct BitTally {
  std::size_t aligned = 0;
  std::size_t orthogonal = 0;
  bool tie = false;
};

struct BobReport {
  SessionOutcome outcome = SessionOutcome::Completed;
  std::optional<Stage> detected_on;
  std::optional<Angle> theta_hat;
  std::optional<std::size_t> theta_hat_index;
  std::vector<std::uint8_t> decoded_bits;
  std::vector<BitTally> tallies;
};

/// Bob's decode: checks both incoming legs against the announced counts,
/// undoes R(phi) on the cover photons, estimates chi + theta, subtracts chi,
/// snaps to the grid, rotates every message photon by R(theta_hat), measures
/// in basis mu and majority-votes each bit (Aligned -> 0). Even splits decode
/// as 0 and are flagged. A detected deficit aborts with no decoded bits.
BobReport bob_stage3(const BobState& bob, PhotonBatch&& cover_return, PhotonBatch&& message,
                     const SessionConfig& config, const Announced& announced, Rng& rng);

struct LegSnapshot {
  Stage leg;
  std::vector<double> angles;
};

struct Transcript {
  SessionConfig config;
  Angle phi;
  Angle chi;
  /// Absent when the session aborted before Alice acted.
  std::optional<std::size_t> theta_index;
  std::optional<Angle> theta;
  std::optional<Angle> theta_hat;
  std::optional<std::size_t> theta_hat_index;
  /// Indexed by Stage.
  std::array<LegRecord, 3> legs{};
  SessionOutcome outcome = SessionOutcome::Completed;
  std::optional<Stage> detected_on;
  std::vector<std::uint8_t> decoded_bits;
  std::vector<BitTally> tallies;
  std::vector<LegSnapshot> god_view;

  bool aborted() const noexcept { return outcome != SessionOutcome::Completed; }
  std::size_t bit_errors() const;
  const LegRecord& leg(Stage s) const { return legs[static_cast<std::size_t>(s)]; }
};

/// Full two-stage session, deterministic in config.seed. Each party, the
/// channel and the tap draw from independent generators, so a tap that takes
/// nothing leaves the protocol's randomness untouched. Alice checks the
/// cover-out leg and aborts on a deficit before sending anything back.
Transcript run_session(const SessionConfig& config, ChannelTap* tap = nullptr);

/// Seed streams used by run_session.
inline constexpr std::uint64_t kBobStream = 1;
inline constexpr std::uint64_t kAliceStream = 2;
inline constexpr std::uint64_t kChannelStream = 3;
inline constexpr std::uint64_t kEveStream = 4;

}  // namespace piggybank
