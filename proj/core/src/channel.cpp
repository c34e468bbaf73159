#include "piggybank/channel.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/normal.hpp>

#include "piggybank/error.hpp"

namespace piggybank {

Delivery transmit(PhotonBatch&& batch, double loss_rate, ChannelTap* tap, Rng& rng) {
  Delivery out;
  out.record.sent = batch.size();

  PhotonBatch in_flight = std::move(batch);
  double loss = loss_rate;
  if (tap != nullptr) {
    in_flight = tap->intercept(std::move(in_flight));
    out.record.intercepted = tap->last_kept();
    const std::size_t forwarded = in_flight.size();
    if (forwarded > out.record.sent) {
      throw Error(ErrorCode::InvalidArgument, "a channel tap may not add photons to a batch");
    }
    out.record.siphoned = out.record.sent - forwarded;
    if (tap->exploits_loss() && out.record.siphoned > 0 && forwarded > 0) {
      const double expected = static_cast<double>(out.record.sent) * (1.0 - loss_rate);
      loss = std::clamp(1.0 - expected / static_cast<double>(forwarded), 0.0, loss_rate);
    }
  }

  out.batch.origin = in_flight.origin;
  out.batch.photons.reserve(in_flight.size());
  for (auto& photon : in_flight.photons) {
    if (rng.bernoulli(loss)) {
      ++out.record.lost;
    } else {
      out.batch.photons.push_back(std::move(photon));
    }
  }
  out.record.received = out.batch.size();
  return out;
}

}  // namespace piggybank

namespace piggybank {

double detection_floor(std::size_t expected, double loss_rate, double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "confidence must lie in (0, 1)");
  }
  const double n = static_cast<double>(expected);
  if (loss_rate <= 0.0) return n;
  const double z = boost::math::quantile(boost::math::normal_distribution<double>(), confidence);
  return n * (1.0 - loss_rate) - z * std::sqrt(n * loss_rate * (1.0 - loss_rate));
}

bool detect_leg(std::size_t expected, std::size_t received, double loss_rate, double confidence) {
  return static_cast<double>(received) < detection_floor(expected, loss_rate, confidence);
}

}  // namespace piggybank
