#pragma once

#include <cstdint>
#include <random>

namespace voljump {

/// Reproducibility handle. Identical (value, stream) pairs produce
/// bit-identical samples; workers derive their own streams with child().
struct Seed {
  std::uint64_t value = 0;
  std::uint64_t stream = 0;

  /// Independent sub-stream. Children of distinct parents or with distinct
  /// indices do not collide in practice (64-bit mixing).
  Seed child(std::uint64_t index) const;

  friend bool operator==(const Seed&, const Seed&) = default;
};

std::uint64_t splitmix64(std::uint64_t x);

using Engine = std::mt19937_64;

Engine make_engine(const Seed& seed);

}  // namespace voljump
