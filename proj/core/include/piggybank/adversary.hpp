#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "piggybank/channel.hpp"
#include "piggybank/photon_batch.hpp"
#include "piggybank/protocol.hpp"
#include "piggybank/qubit.hpp"
#include "piggybank/random.hpp"
#include "piggybank/tomography.hpp"

namespace piggybank {

struct SiphonResult {
  PhotonBatch eve;
  PhotonBatch remainder;
};

/// Removes `count` photons chosen uniformly without replacement. Both halves
/// keep the original relative order. Throws SiphonExceedsBatch.
SiphonResult siphon(PhotonBatch&& batch, std::size_t count, Rng& rng);

/// Eve's difference-of-estimates attack: tomography on each cover leg
/// (angles chi + phi and chi + phi + theta) and the circular difference.
/// Throws InsufficientPhotons when either sample has fewer than two photons.
Angle eve_estimate_theta(PhotonBatch&& cover_out, PhotonBatch&& cover_return, Rng& rng);

struct PhotonGuess {
  std::uint32_t slot = 0;
  std::uint8_t bit = 0;
};

/// Applies R(theta_hat) and measures in basis mu; one guess per photon.
std::vector<PhotonGuess> eve_decode_message(PhotonBatch&& message, Angle theta_hat, Angle mu,
                                            Rng& rng);

enum class Verdict { Safe, SafeDetected, Unsafe };

std::string_view to_string(Verdict v) noexcept;

struct LegCounts {
  std::size_t cover_out = 0;
  std::size_t cover_return = 0;
  std::size_t message = 0;
};

/// DETECTED iff any leg is below its acceptance band.
bool detect(const LegCounts& expected, const LegCounts& received, double loss_rate,
            double confidence);

enum class AttackMode { None, Siphon, InterceptResend };

std::string_view to_string(AttackMode mode) noexcept;

/// Photons Eve takes per leg. Message photons are spread over the bit groups
/// round-robin, starting at bit 0.
struct SiphonPlan {
  std::size_t cover_out = 0;
  std::size_t cover_return = 0;
  std::size_t message = 0;
};

struct AttackStrategy {
  AttackMode mode = AttackMode::None;
  SiphonPlan siphon_counts;
  AngleGrid eve_grid{8};
  bool exploit_loss = true;
};

/// What Eve is assumed to know: protocol structure and public parameters.
/// phi, chi, theta and the message are not in here.
struct PublicKnowledge {
  std::size_t m_message = 1;
  std::size_t message_length = 1;
  Angle message_basis;
};

PublicKnowledge public_knowledge(const SessionConfig& config);

struct EveReport {
  /// Photons held per leg, indexed by Stage.
  std::array<std::size_t, 3> obtained{};
  std::optional<Angle> theta_hat;
  std::optional<std::size_t> theta_hat_index;
  std::vector<std::uint8_t> bit_guesses;

  std::size_t total_obtained() const noexcept {
    return obtained[0] + obtained[1] + obtained[2];
  }
};

/// Fraction of `truth` matched by the report's guesses.
double eve_bit_accuracy(const EveReport& report, const std::vector<std::uint8_t>& truth);

/// Stateful eavesdropper for one session. Sees only photon batches.
class Eavesdropper final : public ChannelTap {
 public:
  Eavesdropper(AttackStrategy strategy, PublicKnowledge knowledge, std::uint64_t seed);

  PhotonBatch intercept(PhotonBatch&& batch) override;
  std::size_t last_kept() const noexcept override { return last_kept_; }
  bool exploits_loss() const noexcept override;

  /// Final estimate and guesses from whatever was collected. Call once,
  /// after the session.
  EveReport report();

 private:
  PhotonBatch siphon_leg(PhotonBatch&& batch);
  PhotonBatch intercept_resend(PhotonBatch&& batch);
  void settle_theta();
  void decode_held_message();

  AttackStrategy strategy_;
  PublicKnowledge knowledge_;
  Rng rng_;
  std::size_t last_kept_ = 0;
  std::array<std::size_t, 3> obtained_{};
  PhotonBatch held_cover_out_;
  PhotonBatch held_cover_return_;
  PhotonBatch held_message_;
  std::optional<Angle> cover_out_estimate_;
  std::optional<Angle> theta_hat_;
  std::optional<std::size_t> theta_hat_index_;
  std::vector<std::uint8_t> bit_guesses_;
};

// ---- Game matrix -----------------------------------------------------------

enum class GameRow { LowNM, HighNM };
enum class GameCol { SiphonFew, SiphonMany };

std::string_view to_string(GameRow r) noexcept;
std::string_view to_string(GameCol c) noexcept;

struct GameConfig {
  SessionConfig low;
  SessionConfig high;
  /// Photons Eve needs per angle determination; the n of the 2n rule is
  /// tomography_photons * eve_budget_factor.
  std::size_t tomography_photons = 128;
  double eve_budget_factor = 1.0;
  SiphonPlan few{4, 4, 0};
  /// Defaults to n per cover leg and one photon per message bit.
  std::optional<SiphonPlan> many;
  AngleGrid eve_grid{8};
  std::size_t trials = 200;
  std::uint64_t seed = 0;

  std::size_t reference_n() const;
  SiphonPlan many_plan(const SessionConfig& session) const;
  void validate() const;
};

/// Low: n_cover = 128, m = 3. High: n_cover = 4096, m = 40. Both with 16
/// message bits, grid 8 and 5% channel loss.
GameConfig default_game_config();

struct GameTrial {
  GameRow row = GameRow::LowNM;
  GameCol col = GameCol::SiphonFew;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::size_t total_photons = 0;
  bool detected = false;
  SessionOutcome outcome = SessionOutcome::Completed;
  double eve_bit_accuracy = 0.0;
  std::size_t bob_bit_errors = 0;
  Verdict verdict = Verdict::Safe;
};

struct GameCell {
  GameRow row = GameRow::LowNM;
  GameCol col = GameCol::SiphonFew;
  Verdict verdict = Verdict::Safe;
  /// Median over trials of the photons Eve obtained across all legs.
  double total_photons = 0.0;
  std::size_t threshold = 0;
  double eve_bit_accuracy = 0.0;
  /// Majority of trials detected.
  bool detected = false;
  double detection_rate = 0.0;
  std::size_t trials = 0;
};

/// UNSAFE iff total >= threshold and not detected; SAFE_DETECTED iff detected.
Verdict classify(double total_photons, std::size_t threshold, bool detected) noexcept;

struct GameMatrix {
  /// [row][col].
  std::array<std::array<GameCell, 2>, 2> cells{};
  std::vector<GameTrial> trials;
  std::size_t threshold = 0;

  const GameCell& at(GameRow r, GameCol c) const {
    return cells[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  }
  /// [SAFE, SAFE_DETECTED; SAFE, UNSAFE].
  bool matches_reference_pattern() const noexcept;
};

/// Runs `trials` sessions per cell. Throws InvalidConfig for zero trials.
GameMatrix evaluate_game(const GameConfig& config);

}  // namespace piggybank
