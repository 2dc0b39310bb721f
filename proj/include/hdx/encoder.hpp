#pragma once

// Record encoder: every feature gets a random identity vector, every
// quantization level gets a vector on a progressively flipped ladder, and a
// record becomes the majority bundle of identity XOR level over its features.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"

#include "hdx/hypervector.hpp"
#include "hdx/matrix.hpp"
#include "hdx/rng.hpp"

namespace hdx {

struct EncoderConfig {
  std::size_t dim = 10000;
  std::size_t levels = 10;
  std::size_t n_features = 41;
  std::uint64_t seed = 0;

  // Throws Error(kConfig) unless levels >= 2, dim >= levels, n_features >= 1.
  void validate() const;

  friend bool operator==(const EncoderConfig&, const EncoderConfig&) = default;
};

// n_features independent random vectors.
std::vector<BitHypervector> build_base_table(const EncoderConfig& config, SeededRng& rng);

// levels vectors; the first is random and each next one flips exactly
// floor(dim / levels) distinct positions of its predecessor.
std::vector<BitHypervector> build_level_ladder(const EncoderConfig& config, SeededRng& rng);

// Clamps value to [0, 1] and returns min(floor(value * levels), levels - 1).
std::size_t quantize(double value, std::size_t levels);

class Encoder {
 public:
  // Regenerates both tables from config.seed: base table first, then the
  // ladder, from the encoder sub-stream of the seed.
  explicit Encoder(const EncoderConfig& config);

  // Adopts explicit tables, e.g. after deserialization.
  Encoder(const EncoderConfig& config, std::vector<BitHypervector> base_table,
          std::vector<BitHypervector> level_ladder);

  [[nodiscard]] const EncoderConfig& config() const noexcept { return config_; }
  [[nodiscard]] const std::vector<BitHypervector>& base_table() const noexcept { return base_; }
  [[nodiscard]] const std::vector<BitHypervector>& level_ladder() const noexcept { return ladder_; }

  // Bound vector for a feature at a level: base[feature] XOR ladder[level].
  [[nodiscard]] const BitHypervector& bound(std::size_t feature, std::size_t level) const {
    return bound_[feature * config_.levels + level];
  }

  // features must hold n_features finite values; out-of-range values clamp.
  [[nodiscard]] BitHypervector encode(std::span<const double> features) const;

 private:
  void check_tables() const;
  void precompute_bound();

  EncoderConfig config_;
  std::vector<BitHypervector> base_;
  std::vector<BitHypervector> ladder_;
  std::vector<BitHypervector> bound_;
};

inline BitHypervector encode_record(const Encoder& encoder, std::span<const double> features) {
  return encoder.encode(features);
}

// Encodes every row, preserving order. threads == 0 picks the hardware
// concurrency. A failing row aborts with its index in the message.
std::vector<BitHypervector> encode_dataset(const Encoder& encoder, const RecordMatrix& records,
                                           unsigned threads = 0);

// Config plus both tables with each vector stored as hex words.
nlohmann::json encoder_to_json(const Encoder& encoder);
Encoder encoder_from_json(const nlohmann::json& doc);

}  // namespace hdx
