#pragma once

// One-class similarity model. Two real prototypes are summed from the
// encoded normal records and from their column-shuffled counterparts, then
// refined online: a normal record that looks more like the shuffled
// prototype is added to the normal one and removed from the shuffled one.

#include <cstddef>
#include <span>
#include <vector>

#include "hdx/hypervector.hpp"
#include "hdx/label.hpp"

namespace hdx {

enum class DecisionMode { kComparative, kAbsolute };

struct TrainConfig {
  double alpha = 0.02;
  std::size_t epochs = 10;
  DecisionMode mode = DecisionMode::kComparative;
  double threshold = 0.0;  // absolute mode only
  bool symmetric_updates = false;

  // Throws Error(kConfig) unless alpha > 0, epochs >= 1 and threshold finite.
  void validate() const;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

struct Scores {
  double sim_norm = 0.0;
  double sim_shuf = 0.0;
};

struct Decision {
  Label label;
  Scores scores;
};

struct SimilarityModel {
  RealHypervector s_norm;
  RealHypervector s_shuf;
  TrainConfig config;
  std::vector<std::size_t> updates_per_epoch;

  [[nodiscard]] std::size_t dim() const noexcept { return s_norm.dim(); }
};

// values[j] = number of inputs with bit j set.
RealHypervector init_similarity(std::span<const BitHypervector> encoded);

// Online refinement in stored order; every update is visible to the next
// sample. With symmetric_updates, each epoch then walks shuf_enc with the
// mirrored rule: a shuffled sample closer to s_norm than to s_shuf is added
// to s_shuf and removed from s_norm.
SimilarityModel train(std::span<const BitHypervector> normal_enc,
                      std::span<const BitHypervector> shuf_enc, const TrainConfig& cfg);

Scores score(const SimilarityModel& model, const BitHypervector& hv);

// Comparative: normal iff sim_norm >= sim_shuf. Absolute: normal iff
// sim_norm > threshold.
Decision classify(const SimilarityModel& model, const BitHypervector& hv);
Label decide(const TrainConfig& cfg, const Scores& scores) noexcept;

}  // namespace hdx
