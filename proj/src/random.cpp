#include "voljump/random.hpp"

namespace voljump {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Seed Seed::child(std::uint64_t index) const {
  return Seed{splitmix64(value ^ splitmix64(stream + 0x632be59bd9b4e019ULL)),
              index};
}

Engine make_engine(const Seed& seed) {
  std::seed_seq seq{
      static_cast<std::uint32_t>(seed.value),
      static_cast<std::uint32_t>(seed.value >> 32),
      static_cast<std::uint32_t>(seed.stream),
      static_cast<std::uint32_t>(seed.stream >> 32)};
  return Engine(seq);
}

}  // namespace voljump
