#include "hypercouple/rng.hpp"

#include <bit>

namespace hypercouple {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngStream RngStream::substream(std::uint64_t tag) const {
  return RngStream{seed, splitmix64(stream ^ splitmix64(tag + 0x5851f42d4c957f2dULL))};
}

Rng::Rng(RngStream id)
    : engine_(splitmix64(splitmix64(id.seed) ^ (id.stream * 0xd1342543de82ef95ULL + 1))) {}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound <= 1) return 0;
  // Mask rejection: draw ceil(log2 bound) bits until the value lands in range.
  const int bits = std::bit_width(bound - 1);
  const std::uint64_t mask = bits >= 64 ? ~0ULL : ((1ULL << bits) - 1);
  while (true) {
    const std::uint64_t x = engine_() & mask;
    if (x < bound) return x;
  }
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

}  // namespace hypercouple
