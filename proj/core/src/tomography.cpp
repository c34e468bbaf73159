#include "piggybank/tomography.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "piggybank/error.hpp"

namespace piggybank {

AngleGrid::AngleGrid(std::size_t size) : size_(size) {
  if (size == 0) throw Error(ErrorCode::InvalidArgument, "angle grid must be nonempty");
}

double AngleGrid::spacing() const noexcept { return kPi / static_cast<double>(size_); }

Angle AngleGrid::angle(std::size_t index) const {
  if (index >= size_) {
    throw Error(ErrorCode::InvalidArgument, "grid index " + std::to_string(index) + " out of range");
  }
  return Angle(static_cast<double>(index) * spacing());
}

std::size_t snap_to_grid(Angle a, const AngleGrid& grid) {
  // The nearest point is one of the two grid neighbours of a.
  const double t = a.radians() / grid.spacing();
  std::size_t lo = static_cast<std::size_t>(std::floor(t));
  if (lo >= grid.size()) lo = grid.size() - 1;
  const std::size_t hi = (lo + 1) % grid.size();

  const double d_lo = circular_distance(a, grid.angle(lo));
  const double d_hi = circular_distance(a, grid.angle(hi));
  if (d_lo < d_hi) return lo;
  if (d_hi < d_lo) return hi;
  return std::min(lo, hi);
}

TomographyResult estimate_angle(PhotonBatch&& batch, Rng& rng) {
  const std::size_t c = batch.size();
  if (c < 2) {
    throw Error(ErrorCode::InsufficientPhotons,
                "tomography needs at least 2 photons, got " + std::to_string(c));
  }
  const Angle bases[2] = {Angle(0.0), Angle(kPi / 4)};

  TomographyResult result;
  for (std::size_t i = 0; i < c; ++i) {
    const std::size_t b = i % 2;
    auto& counts = result.counts[b];
    ++counts.total;
    if (measure(std::move(batch.photons[i].state), bases[b], rng) == Outcome::Aligned) {
      ++counts.aligned;
    }
  }
  batch.photons.clear();

  const double f0 = result.counts[0].aligned_fraction();
  const double f1 = result.counts[1].aligned_fraction();
  result.estimate = Angle(0.5 * std::atan2(2.0 * f1 - 1.0, 2.0 * f0 - 1.0));
  result.photons_used = c;
  return result;
}

TomographyResult estimate_angle(PhotonBatch&& batch, const AngleGrid& grid, Rng& rng) {
  TomographyResult result = estimate_angle(std::move(batch), rng);
  result.snapped = snap_to_grid(result.estimate, grid);
  return result;
}

std::uint64_t required_photons(unsigned k) {
  if (k >= 64) {
    throw Error(ErrorCode::Overflow, "2^" + std::to_string(k) + " does not fit in 64 bits");
  }
  return std::uint64_t{1} << k;
}

unsigned grid_bits(std::size_t grid_size) {
  if (grid_size <= 1) return 0;
  return static_cast<unsigned>(std::bit_width(grid_size - 1));
}

TomographyTrialStats tomography_trials(const AngleGrid& grid, std::size_t photons,
                                       std::size_t trials, Rng& rng) {
  if (trials == 0) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");

  std::size_t hits = 0;
  double sq_err = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t truth = rng.below(grid.size());
    const Angle a = grid.angle(truth);
    const auto r = estimate_angle(make_batch(Stage::CoverReturn, linear_state(a), photons), grid, rng);
    if (*r.snapped == truth) ++hits;
    const double e = circular_distance(r.estimate, a);
    sq_err += e * e;
  }
  const auto n = static_cast<double>(trials);
  return {static_cast<double>(hits) / n, std::sqrt(sq_err / n), trials};
}

double empirical_success_probability(const AngleGrid& grid, std::size_t photons,
                                     std::size_t trials, Rng& rng) {
  return tomography_trials(grid, photons, trials, rng).success_rate;
}

}  // namespace piggybank
