#include "piggybank/experiments.hpp"

#include <algorithm>
#include <string>

#include "piggybank/error.hpp"

namespace piggybank {

BitErrorStats bit_error_rate(const SessionConfig& base, std::size_t sessions, std::uint64_t seed,
                             bool random_bits) {
  BitErrorStats stats;
  for (std::size_t i = 0; i < sessions; ++i) {
    SessionConfig cfg = base;
    cfg.seed = derive_seed(seed, i);
    if (random_bits) {
      Rng bits_rng(derive_seed(cfg.seed, 0));
      for (auto& b : cfg.message_bits) b = bits_rng.bernoulli(0.5) ? 1 : 0;
    }
    const Transcript t = run_session(cfg);
    ++stats.sessions;
    if (t.aborted()) continue;
    ++stats.completed;
    stats.bits += t.decoded_bits.size();
    stats.bit_errors += t.bit_errors();
  }
  return stats;
}

SessionConfig SweepConfig::default_base() {
  SessionConfig base;
  base.grid = AngleGrid(16);
  base.loss_rate = 0.10;
  base.message_bits.assign(32, 0);
  return base;
}

void SweepConfig::validate() const {
  if (n_ladder.empty()) throw Error(ErrorCode::InvalidConfig, "n_ladder must be nonempty");
  if (max_m == 0) throw Error(ErrorCode::InvalidConfig, "max_m must be >= 1");
  if (trials == 0) throw Error(ErrorCode::InvalidConfig, "trials must be >= 1");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "epsilon must lie in [0, 1]");
  }
  for (auto n : n_ladder) {
    if (n < 2) throw Error(ErrorCode::InvalidConfig, "every n in the ladder must be >= 2");
  }
}

std::vector<SweepRow> sweep_nm(const SweepConfig& config) {
  config.validate();
  std::vector<std::size_t> ladder = config.n_ladder;
  std::sort(ladder.begin(), ladder.end());
  ladder.erase(std::unique(ladder.begin(), ladder.end()), ladder.end());

  std::vector<SweepRow> rows;
  for (const std::size_t n : ladder) {
    SweepRow row;
    row.n_cover = n;
    row.trials = config.trials;
    // Same session seeds for every m at this n, so successive m values see
    // the same secrets and tomography outcomes.
    const std::uint64_t point_seed = derive_seed(config.seed, n);
    for (std::size_t m = 1; m <= config.max_m; ++m) {
      SessionConfig cfg = config.base;
      cfg.n_cover = n;
      cfg.m_message = m;
      if (static_cast<double>(m) > static_cast<double>(n) * cfg.m_guard_ratio) break;
      const BitErrorStats stats = bit_error_rate(cfg, config.trials, point_seed);
      row.achieved_error = stats.error_rate();
      if (row.achieved_error <= config.epsilon) {
        row.required_m = m;
        break;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

void BenchConfig::validate() const {
  if (grid_sizes.empty() || photon_ladder.empty()) {
    throw Error(ErrorCode::InvalidConfig, "grid_sizes and photon_ladder must be nonempty");
  }
  if (trials == 0) throw Error(ErrorCode::InvalidConfig, "trials must be >= 1");
  for (auto g : grid_sizes) {
    if (g == 0) throw Error(ErrorCode::InvalidConfig, "grid sizes must be >= 1");
  }
  for (auto c : photon_ladder) {
    if (c < 2) throw Error(ErrorCode::InvalidConfig, "photon counts must be >= 2");
  }
}

BenchResult tomography_bench(const BenchConfig& config) {
  config.validate();
  std::vector<std::size_t> ladder = config.photon_ladder;
  std::sort(ladder.begin(), ladder.end());

  BenchResult result;
  for (const std::size_t g : config.grid_sizes) {
    const AngleGrid grid(g);
    BenchResult::Requirement req;
    req.grid_size = g;
    req.paper_budget = required_photons(grid_bits(g));
    for (const std::size_t c : ladder) {
      Rng rng(derive_seed(derive_seed(config.seed, g), c));
      const TomographyTrialStats stats = tomography_trials(grid, c, config.trials, rng);
      result.rows.push_back({g, c, req.paper_budget, stats.success_rate, stats.rmse, stats.trials});
      if (!req.empirical && stats.success_rate >= config.target_success) req.empirical = c;
    }
    result.requirements.push_back(req);
  }
  return result;
}

}  // namespace piggybank
