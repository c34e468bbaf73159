#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "piggybank/protocol.hpp"
#include "piggybank/tomography.hpp"

namespace piggybank {

struct BitErrorStats {
  std::size_t sessions = 0;
  std::size_t completed = 0;
  std::size_t bits = 0;
  std::size_t bit_errors = 0;

  double error_rate() const noexcept {
    return bits == 0 ? 1.0 : static_cast<double>(bit_errors) / static_cast<double>(bits);
  }
};

/// Runs `sessions` independent no-adversary sessions built from `base`.
/// Each session gets seed derive_seed(seed, i) and, when random_bits is set,
/// a fresh uniformly random message of base.message_bits.size() bits.
/// Aborted sessions contribute no bits.
BitErrorStats bit_error_rate(const SessionConfig& base, std::size_t sessions, std::uint64_t seed,
                             bool random_bits = true);

struct SweepConfig {
  std::vector<std::size_t> n_ladder{64, 256, 1024, 4096};
  std::size_t max_m = 15;
  double epsilon = 0.01;
  std::size_t trials = 3000;
  /// n_cover and m_message are overwritten per point.
  SessionConfig base = default_base();
  std::uint64_t seed = 0;

  static SessionConfig default_base();
  void validate() const;
};

struct SweepRow {
  std::size_t n_cover = 0;
  /// Absent when no m up to max_m (and within the m << n guard) reached epsilon.
  std::optional<std::size_t> required_m;
  double achieved_error = 1.0;
  std::size_t trials = 0;
};

/// For each n (ascending) the smallest m, searched linearly from 1, whose
/// decoded bit-error rate over `trials` sessions is <= epsilon.
std::vector<SweepRow> sweep_nm(const SweepConfig& config);

struct BenchConfig {
  std::vector<std::size_t> grid_sizes{1, 4, 8, 16};
  std::vector<std::size_t> photon_ladder{16, 64, 256, 1024, 4096};
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  /// Success rate that counts as "identified".
  double target_success = 0.99;

  void validate() const;
};

struct BenchRow {
  std::size_t grid_size = 0;
  std::size_t photons = 0;
  std::uint64_t paper_budget = 0;
  double success_rate = 0.0;
  double rmse = 0.0;
  std::size_t trials = 0;
};

struct BenchResult {
  std::vector<BenchRow> rows;
  /// Per grid size: the 2^k budget and the smallest ladder photon count whose
  /// success rate reached target_success (absent if none did).
  struct Requirement {
    std::size_t grid_size = 0;
    std::uint64_t paper_budget = 0;
    std::optional<std::size_t> empirical;
  };
  std::vector<Requirement> requirements;
};

BenchResult tomography_bench(const BenchConfig& config);

}  // namespace piggybank
