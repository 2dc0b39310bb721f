#pragma once

#include <cstdint>
#include <random>

namespace hdx {

// Deterministic random source. Backed by std::mt19937_64, whose output
// sequence is fixed by the C++ standard; bounded draws use our own rejection
// sampling because std::uniform_int_distribution is implementation-defined.
// Together this gives the same stream on every conforming platform.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

  // Next raw 64-bit draw.
  std::uint64_t next_u64() { return engine_(); }

  // Uniform integer in [0, bound). bound must be nonzero.
  std::uint64_t uniform_below(std::uint64_t bound);

  // Independent generator for a named sub-stream, derived from this
  // generator's seed (not its current state) via a splitmix64 mix.
  [[nodiscard]] SeededRng derive(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

// Stream tags used across the pipeline.
inline constexpr std::uint64_t kStreamEncoder = 1;
inline constexpr std::uint64_t kStreamShuffle = 2;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace hdx
