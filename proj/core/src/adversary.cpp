#include "piggybank/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "piggybank/error.hpp"

namespace piggybank {

namespace {

/// Moves the photons whose mask entry is set into the first batch.
SiphonResult split(PhotonBatch&& batch, const std::vector<bool>& take) {
  SiphonResult out;
  out.eve.origin = batch.origin;
  out.remainder.origin = batch.origin;
  for (std::size_t i = 0; i < batch.photons.size(); ++i) {
    (take[i] ? out.eve : out.remainder).photons.push_back(std::move(batch.photons[i]));
  }
  batch.photons.clear();
  return out;
}

/// Marks `count` of `candidates` uniformly without replacement.
void mark_random(std::vector<std::size_t> candidates, std::size_t count, std::vector<bool>& take,
                 Rng& rng) {
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.below(candidates.size() - i);
    std::swap(candidates[i], candidates[j]);
    take[candidates[i]] = true;
  }
}

std::uint8_t coin(Rng& rng) { return rng.bernoulli(0.5) ? 1 : 0; }

std::size_t stage_index(Stage s) { return static_cast<std::size_t>(s); }

}  // namespace

SiphonResult siphon(PhotonBatch&& batch, std::size_t count, Rng& rng) {
  if (count > batch.size()) {
    throw Error(ErrorCode::SiphonExceedsBatch, "cannot siphon " + std::to_string(count) +
                                                   " photons from a batch of " +
                                                   std::to_string(batch.size()));
  }
  std::vector<std::size_t> all(batch.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::vector<bool> take(batch.size(), false);
  mark_random(std::move(all), count, take, rng);
  return split(std::move(batch), take);
}

Angle eve_estimate_theta(PhotonBatch&& cover_out, PhotonBatch&& cover_return, Rng& rng) {
  const Angle before = estimate_angle(std::move(cover_out), rng).estimate;
  const Angle after = estimate_angle(std::move(cover_return), rng).estimate;
  return Angle(after.radians() - before.radians());
}

std::vector<PhotonGuess> eve_decode_message(PhotonBatch&& message, Angle theta_hat, Angle mu,
                                            Rng& rng) {
  std::vector<PhotonGuess> guesses;
  guesses.reserve(message.size());
  const Rotation redo(theta_hat);
  for (auto& p : message.photons) {
    const Outcome o = measure(rotate(p.state, redo), mu, rng);
    guesses.push_back({p.slot, static_cast<std::uint8_t>(o == Outcome::Orthogonal ? 1 : 0)});
  }
  message.photons.clear();
  return guesses;
}

bool detect(const LegCounts& expected, const LegCounts& received, double loss_rate,
            double confidence) {
  return detect_leg(expected.cover_out, received.cover_out, loss_rate, confidence) ||
         detect_leg(expected.cover_return, received.cover_return, loss_rate, confidence) ||
         detect_leg(expected.message, received.message, loss_rate, confidence);
}

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Safe: return "SAFE";
    case Verdict::SafeDetected: return "SAFE_DETECTED";
    case Verdict::Unsafe: return "UNSAFE";
  }
  return "UNKNOWN";
}

std::string_view to_string(AttackMode mode) noexcept {
  switch (mode) {
    case AttackMode::None: return "none";
    case AttackMode::Siphon: return "siphon";
    case AttackMode::InterceptResend: return "intercept_resend";
  }
  return "unknown";
}

PublicKnowledge public_knowledge(const SessionConfig& config) {
  return {config.m_message, config.message_bits.size(), config.message_basis};
}

double eve_bit_accuracy(const EveReport& report, const std::vector<std::uint8_t>& truth) {
  if (truth.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (i < report.bit_guesses.size() && report.bit_guesses[i] == truth[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

// ---- Eavesdropper ----------------------------------------------------------

Eavesdropper::Eavesdropper(AttackStrategy strategy, PublicKnowledge knowledge, std::uint64_t seed)
    : strategy_(strategy), knowledge_(knowledge), rng_(seed) {
  held_cover_out_.origin = Stage::CoverOut;
  held_cover_return_.origin = Stage::CoverReturn;
  held_message_.origin = Stage::Message;
}

bool Eavesdropper::exploits_loss() const noexcept {
  return strategy_.mode == AttackMode::Siphon && strategy_.exploit_loss;
}

PhotonBatch Eavesdropper::intercept(PhotonBatch&& batch) {
  last_kept_ = 0;
  switch (strategy_.mode) {
    case AttackMode::None: return std::move(batch);
    case AttackMode::Siphon: return siphon_leg(std::move(batch));
    case AttackMode::InterceptResend: return intercept_resend(std::move(batch));
  }
  return std::move(batch);
}

PhotonBatch Eavesdropper::siphon_leg(PhotonBatch&& batch) {
  const Stage leg = batch.origin;
  std::vector<bool> take(batch.size(), false);

  if (leg == Stage::Message) {
    // One group per message bit; the round-robin share of each group is
    // drawn uniformly within it.
    const std::size_t m = std::max<std::size_t>(knowledge_.m_message, 1);
    const std::size_t groups = std::max<std::size_t>(knowledge_.message_length, 1);
    std::vector<std::vector<std::size_t>> members(groups);
    for (std::size_t i = 0; i < batch.size(); ++i) {
      members[std::min<std::size_t>(batch.photons[i].slot / m, groups - 1)].push_back(i);
    }
    const std::size_t want = strategy_.siphon_counts.message;
    for (std::size_t g = 0; g < groups; ++g) {
      const std::size_t share = want / groups + (g < want % groups ? 1 : 0);
      const std::size_t k = std::min(share, members[g].size());
      mark_random(std::move(members[g]), k, take, rng_);
    }
  } else {
    const std::size_t want = leg == Stage::CoverOut ? strategy_.siphon_counts.cover_out
                                                    : strategy_.siphon_counts.cover_return;
    std::vector<std::size_t> all(batch.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    mark_random(std::move(all), std::min(want, batch.size()), take, rng_);
  }

  SiphonResult parts = split(std::move(batch), take);
  last_kept_ = parts.eve.size();
  obtained_[stage_index(leg)] += last_kept_;

  PhotonBatch& held = leg == Stage::CoverOut      ? held_cover_out_
                      : leg == Stage::CoverReturn ? held_cover_return_
                                                  : held_message_;
  for (auto& p : parts.eve.photons) held.photons.push_back(std::move(p));
  return std::move(parts.remainder);
}

PhotonBatch Eavesdropper::intercept_resend(PhotonBatch&& batch) {
  const Stage leg = batch.origin;
  last_kept_ = batch.size();
  obtained_[stage_index(leg)] += batch.size();

  PhotonBatch resent;
  resent.origin = leg;
  resent.photons.reserve(batch.size());
  std::vector<std::uint32_t> slots;
  slots.reserve(batch.size());
  for (const auto& p : batch.photons) slots.push_back(p.slot);

  if (leg == Stage::Message) {
    if (!theta_hat_index_) settle_theta();
    held_message_.photons = std::move(batch.photons);
    decode_held_message();
    const Rotation undo = adjoint(Rotation(strategy_.eve_grid.angle(*theta_hat_index_)));
    const std::size_t m = std::max<std::size_t>(knowledge_.m_message, 1);
    for (const auto slot : slots) {
      const std::size_t bit = std::min<std::size_t>(slot / m, bit_guesses_.size() - 1);
      const Angle y(knowledge_.message_basis.radians() + (bit_guesses_[bit] ? kPi / 2 : 0.0));
      resent.photons.push_back(Photon{rotate(linear_state(y), undo), slot});
    }
    return resent;
  }

  // Measure everything, then prepare fresh photons at the estimated angle.
  Angle estimate;
  if (batch.size() >= 2) {
    estimate = estimate_angle(std::move(batch), rng_).estimate;
  } else if (batch.size() == 1) {
    const Outcome o = measure(std::move(batch.photons[0].state), Angle(0.0), rng_);
    estimate = Angle(o == Outcome::Aligned ? 0.0 : kPi / 2);
  }
  if (leg == Stage::CoverOut) {
    cover_out_estimate_ = estimate;
  } else if (cover_out_estimate_) {
    theta_hat_ = Angle(estimate.radians() - cover_out_estimate_->radians());
    theta_hat_index_ = snap_to_grid(*theta_hat_, strategy_.eve_grid);
  }
  const Qubit fresh = linear_state(estimate);
  for (const auto slot : slots) resent.photons.push_back(Photon{fresh, slot});
  return resent;
}

void Eavesdropper::settle_theta() {
  if (theta_hat_index_) return;
  if (strategy_.mode == AttackMode::Siphon && held_cover_out_.size() >= 2 &&
      held_cover_return_.size() >= 2) {
    theta_hat_ = eve_estimate_theta(std::move(held_cover_out_), std::move(held_cover_return_), rng_);
    theta_hat_index_ = snap_to_grid(*theta_hat_, strategy_.eve_grid);
    return;
  }
  // Not enough photons: a blind guess on the grid.
  theta_hat_index_ = rng_.below(strategy_.eve_grid.size());
}

void Eavesdropper::decode_held_message() {
  const std::size_t bits = std::max<std::size_t>(knowledge_.message_length, 1);
  const std::size_t m = std::max<std::size_t>(knowledge_.m_message, 1);
  std::vector<std::size_t> ones(bits, 0);
  std::vector<std::size_t> seen(bits, 0);
  if (!held_message_.empty()) {
    const Angle theta = strategy_.eve_grid.angle(*theta_hat_index_);
    for (const auto& g : eve_decode_message(std::move(held_message_), theta,
                                            knowledge_.message_basis, rng_)) {
      const std::size_t bit = std::min<std::size_t>(g.slot / m, bits - 1);
      ++seen[bit];
      ones[bit] += g.bit;
    }
  }
  bit_guesses_.assign(bits, 0);
  for (std::size_t b = 0; b < bits; ++b) {
    if (seen[b] == 0 || 2 * ones[b] == seen[b]) {
      bit_guesses_[b] = coin(rng_);
    } else {
      bit_guesses_[b] = 2 * ones[b] > seen[b] ? 1 : 0;
    }
  }
}

EveReport Eavesdropper::report() {
  if (bit_guesses_.empty()) {
    settle_theta();
    decode_held_message();
  }
  EveReport r;
  r.obtained = obtained_;
  r.theta_hat = theta_hat_;
  r.theta_hat_index = theta_hat_index_;
  r.bit_guesses = bit_guesses_;
  if (strategy_.mode == AttackMode::None) {
    r.theta_hat.reset();
    r.theta_hat_index.reset();
  }
  return r;
}

// ---- Game matrix -----------------------------------------------------------

std::string_view to_string(GameRow r) noexcept {
  return r == GameRow::LowNM ? "low_nm" : "high_nm";
}

std::string_view to_string(GameCol c) noexcept {
  return c == GameCol::SiphonFew ? "siphon_few" : "siphon_many";
}

std::size_t GameConfig::reference_n() const {
  return static_cast<std::size_t>(
      std::ceil(static_cast<double>(tomography_photons) * eve_budget_factor));
}

SiphonPlan GameConfig::many_plan(const SessionConfig& session) const {
  if (many) return *many;
  const std::size_t n = reference_n();
  return {n, n, session.message_bits.size()};
}

void GameConfig::validate() const {
  if (trials == 0) throw Error(ErrorCode::InvalidConfig, "game trials must be >= 1");
  if (tomography_photons == 0 || !(eve_budget_factor > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "tomography_photons and eve_budget_factor must be > 0");
  }
  if (low.n_cover >= high.n_cover) {
    throw Error(ErrorCode::InvalidConfig, "low.n_cover must be below high.n_cover");
  }
  low.validate();
  high.validate();
}

GameConfig default_game_config() {
  GameConfig g;
  g.low.n_cover = 128;
  g.low.m_message = 3;
  g.low.grid = AngleGrid(8);
  g.low.message_bits.assign(16, 0);
  g.low.loss_rate = 0.05;

  g.high = g.low;
  g.high.n_cover = 4096;
  g.high.m_message = 40;
  return g;
}

Verdict classify(double total_photons, std::size_t threshold, bool detected) noexcept {
  if (detected) return Verdict::SafeDetected;
  if (total_photons >= static_cast<double>(threshold)) return Verdict::Unsafe;
  return Verdict::Safe;
}

bool GameMatrix::matches_reference_pattern() const noexcept {
  return at(GameRow::LowNM, GameCol::SiphonFew).verdict == Verdict::Safe &&
         at(GameRow::LowNM, GameCol::SiphonMany).verdict == Verdict::SafeDetected &&
         at(GameRow::HighNM, GameCol::SiphonFew).verdict == Verdict::Safe &&
         at(GameRow::HighNM, GameCol::SiphonMany).verdict == Verdict::Unsafe;
}

GameMatrix evaluate_game(const GameConfig& config) {
  config.validate();
  GameMatrix out;
  out.threshold = 2 * config.reference_n();

  for (const GameRow row : {GameRow::LowNM, GameRow::HighNM}) {
    const SessionConfig& base = row == GameRow::LowNM ? config.low : config.high;
    for (const GameCol col : {GameCol::SiphonFew, GameCol::SiphonMany}) {
      const std::size_t cell_id = 2 * static_cast<std::size_t>(row) + static_cast<std::size_t>(col);
      const std::uint64_t cell_seed = derive_seed(config.seed, cell_id);
      AttackStrategy strategy;
      strategy.mode = AttackMode::Siphon;
      strategy.siphon_counts = col == GameCol::SiphonFew ? config.few : config.many_plan(base);
      strategy.eve_grid = config.eve_grid;

      std::vector<double> totals;
      std::size_t detections = 0;
      double accuracy_sum = 0.0;
      for (std::size_t trial = 0; trial < config.trials; ++trial) {
        SessionConfig session = base;
        session.seed = derive_seed(cell_seed, trial);
        Rng bits_rng(derive_seed(session.seed, 0));
        for (auto& b : session.message_bits) b = bits_rng.bernoulli(0.5) ? 1 : 0;

        Eavesdropper eve(strategy, public_knowledge(session),
                         derive_seed(session.seed, kEveStream));
        const Transcript t = run_session(session, &eve);
        const EveReport report = eve.report();

        GameTrial g;
        g.row = row;
        g.col = col;
        g.trial = trial;
        g.seed = session.seed;
        g.total_photons = report.total_obtained();
        g.outcome = t.outcome;
        g.detected = t.outcome == SessionOutcome::AbortDetected;
        g.eve_bit_accuracy = eve_bit_accuracy(report, session.message_bits);
        g.bob_bit_errors = t.bit_errors();
        g.verdict = classify(static_cast<double>(g.total_photons), out.threshold, g.detected);
        out.trials.push_back(g);

        totals.push_back(static_cast<double>(g.total_photons));
        detections += g.detected ? 1 : 0;
        accuracy_sum += g.eve_bit_accuracy;
      }

      std::sort(totals.begin(), totals.end());
      const std::size_t mid = totals.size() / 2;
      const double median =
          totals.size() % 2 ? totals[mid] : 0.5 * (totals[mid - 1] + totals[mid]);

      GameCell& cell = out.cells[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
      cell.row = row;
      cell.col = col;
      cell.total_photons = median;
      cell.threshold = out.threshold;
      cell.trials = config.trials;
      cell.detection_rate = static_cast<double>(detections) / static_cast<double>(config.trials);
      cell.detected = 2 * detections > config.trials;
      cell.eve_bit_accuracy = accuracy_sum / static_cast<double>(config.trials);
      cell.verdict = classify(cell.total_photons, cell.threshold, cell.detected);
    }
  }
  return out;
}

}  // namespace piggybank
