#pragma once

#include <cstddef>

#include "piggybank/photon_batch.hpp"
#include "piggybank/random.hpp"

namespace piggybank {

/// Photon accounting for one channel leg.
/// Invariant: received + siphoned + lost == sent.
struct LegRecord {
  std::size_t sent = 0;
  std::size_t received = 0;
  /// Net photons removed by an interceptor (taken minus resent).
  std::size_t siphoned = 0;
  std::size_t lost = 0;
  /// Photons an interceptor actually held, including ones later resent.
  std::size_t intercepted = 0;
};

/// Anything that sits on the channel and sees photon batches. This is the
/// only surface an eavesdropper gets: batches in, batch out.
class ChannelTap {
 public:
  virtual ~ChannelTap() = default;

  /// Returns the photons that continue down the channel.
  virtual PhotonBatch intercept(PhotonBatch&& batch) = 0;

  /// Number of photons the tap kept for itself on the last call.
  virtual std::size_t last_kept() const noexcept = 0;

  /// When true the tap replaces the lossy segment of the channel and keeps
  /// the photons that would have been lost.
  virtual bool exploits_loss() const noexcept { return false; }
};

struct Delivery {
  PhotonBatch batch;
  LegRecord record;
};

/// Sends `batch` over a leg with independent per-photon loss. If a tap is
/// present it sees the batch first. A loss-exploiting tap that removed s
/// photons out of N leaves the remainder with loss 1 - N (1 - loss) / (N - s),
/// clamped to [0, loss], so the expected arrival count is unchanged while
/// s <= loss * N.
Delivery transmit(PhotonBatch&& batch, double loss_rate, ChannelTap* tap, Rng& rng);

/// Lower edge of the acceptance band for one leg:
/// expected (1 - loss) - z(confidence) sqrt(expected loss (1 - loss)).
double detection_floor(std::size_t expected, double loss_rate, double confidence);

/// True when `received` falls below the acceptance band. In a lossless
/// channel any deficit detects.
bool detect_leg(std::size_t expected, std::size_t received, double loss_rate, double confidence);

}  // namespace piggybank
