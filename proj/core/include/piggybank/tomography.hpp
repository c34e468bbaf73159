#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "piggybank/photon_batch.hpp"
#include "piggybank/qubit.hpp"
#include "piggybank/random.hpp"

namespace piggybank {

/// `size` equally spaced angles i * pi / size in [0, pi).
class AngleGrid {
 public:
  /// Throws InvalidArgument for size 0.
  explicit AngleGrid(std::size_t size);

  std::size_t size() const noexcept { return size_; }
  double spacing() const noexcept;
  Angle angle(std::size_t index) const;

  friend bool operator==(const AngleGrid&, const AngleGrid&) = default;

 private:
  std::size_t size_;
};

/// Index of the grid angle nearest to `a` on the period-pi circle.
/// Ties go to the lower index.
std::size_t snap_to_grid(Angle a, const AngleGrid& grid);

struct BasisCounts {
  std::size_t aligned = 0;
  std::size_t total = 0;

  double aligned_fraction() const noexcept {
    return total == 0 ? 0.0 : static_cast<double>(aligned) / static_cast<double>(total);
  }
};

struct TomographyResult {
  Angle estimate;
  std::optional<std::size_t> snapped;
  std::size_t photons_used = 0;
  /// [0] basis 0, [1] basis pi/4.
  std::array<BasisCounts, 2> counts{};
};

/// Two-basis estimate of the common polarization angle of a batch.
///
/// Even-indexed photons are measured in basis 0 and odd-indexed ones in basis
/// pi/4, so an odd photon count favours basis 0. With aligned fractions f0
/// and f1 the estimate is atan2(2 f1 - 1, 2 f0 - 1) / 2, which inverts
/// f0 = cos^2 a and f1 = cos^2(a - pi/4). Throws InsufficientPhotons for
/// fewer than two photons.
TomographyResult estimate_angle(PhotonBatch&& batch, Rng& rng);

/// Same, with the estimate snapped onto `grid`.
TomographyResult estimate_angle(PhotonBatch&& batch, const AngleGrid& grid, Rng& rng);

/// 2^k. Throws Overflow for k >= 64.
std::uint64_t required_photons(unsigned k);

/// Smallest k with 2^k >= grid_size.
unsigned grid_bits(std::size_t grid_size);

struct TomographyTrialStats {
  double success_rate = 0.0;
  double rmse = 0.0;
  std::size_t trials = 0;
};

/// Repeats: draw a grid angle uniformly, prepare `photons` copies of it,
/// estimate and snap. Reports the fraction of trials that snap to the true
/// index and the RMSE of the raw estimate (circular distance).
/// Throws InvalidArgument for zero trials.
TomographyTrialStats tomography_trials(const AngleGrid& grid, std::size_t photons,
                                       std::size_t trials, Rng& rng);

double empirical_success_probability(const AngleGrid& grid, std::size_t photons,
                                     std::size_t trials, Rng& rng);

}  // namespace piggybank
