#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "piggybank/qubit.hpp"

namespace piggybank {

enum class Stage { CoverOut, CoverReturn, Message };

std::string_view to_string(Stage stage) noexcept;

struct Photon {
  Qubit state;
  /// Time bin assigned by the sender. Survives loss and siphoning, so the
  /// receiver can tell which message bit a photon belongs to.
  std::uint32_t slot = 0;
};

/// Photons in transit on one channel leg. The batch only ever shrinks in
/// transit; nothing in the library appends to a batch after it is sent.
struct PhotonBatch {
  Stage origin = Stage::CoverOut;
  std::vector<Photon> photons;

  std::size_t size() const noexcept { return photons.size(); }
  bool empty() const noexcept { return photons.empty(); }
};

/// count copies of `state` with slots 0..count-1.
PhotonBatch make_batch(Stage origin, const Qubit& state, std::size_t count);

}  // namespace piggybank
