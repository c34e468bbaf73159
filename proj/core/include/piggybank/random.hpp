#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace piggybank {

/// Seeded random source. Passed explicitly to every stochastic operation;
/// there is no global generator.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform();
  /// Uniform in [0, pi).
  double uniform_half_turn();
  bool bernoulli(double p);
  /// Uniform integer in [0, bound). bound must be positive.
  std::size_t below(std::size_t bound);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Independent child seed for (base, stream). Used to give each party,
/// trial and sweep point its own generator.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept;

}  // namespace piggybank
