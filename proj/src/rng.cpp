#include "hdx/rng.hpp"

#include <limits>
#include <stdexcept>

namespace hdx {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t SeededRng::uniform_below(std::uint64_t bound) {
  if (bound == 0) {
    throw std::invalid_argument("uniform_below: bound must be nonzero");
  }
  // 2^64 mod bound draws at the top of the range would bias low residues.
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t excess = (kMax % bound + 1) % bound;
  std::uint64_t draw = engine_();
  if (excess != 0) {
    const std::uint64_t limit = kMax - excess + 1;
    while (draw >= limit) {
      draw = engine_();
    }
  }
  return draw % bound;
}

SeededRng SeededRng::derive(std::uint64_t stream) const {
  return SeededRng(splitmix64(seed_ ^ splitmix64(stream)));
}

}  // namespace hdx
