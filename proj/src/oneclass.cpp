#include "hdx/oneclass.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hdx/error.hpp"

namespace hdx {

void TrainConfig::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorKind::kConfig, "train: alpha must be a positive finite number");
  }
  if (epochs == 0) throw Error(ErrorKind::kConfig, "train: epochs must be at least 1");
  if (mode == DecisionMode::kAbsolute && !std::isfinite(threshold)) {
    throw Error(ErrorKind::kConfig, "train: absolute mode needs a finite threshold");
  }
}

RealHypervector init_similarity(std::span<const BitHypervector> encoded) {
  if (encoded.empty()) {
    throw Error(ErrorKind::kEmptySubset, "init_similarity: no encoded samples");
  }
  IntAccumulator acc(encoded.front().dim());
  for (const BitHypervector& hv : encoded) accumulate(acc, hv);
  std::vector<double> values(acc.values().begin(), acc.values().end());
  return RealHypervector(std::move(values));
}

namespace {

// Running prototype with its squared norm maintained incrementally between
// exact refreshes.
struct Prototype {
  RealHypervector values;
  double norm_sq = 0.0;

  void refresh() {
    const double n = euclidean_norm(values);
    norm_sq = n * n;
  }

  [[nodiscard]] double norm() const { return std::sqrt(std::max(norm_sq, 0.0)); }

  void add(double alpha, const BitHypervector& hv, double hv_dot, std::size_t ones, Sign sign) {
    const double step = static_cast<double>(static_cast<int>(sign)) * alpha;
    norm_sq += 2.0 * step * hv_dot + step * step * static_cast<double>(ones);
    axpy(values, alpha, hv, sign);
  }
};

double cosine_from_dot(double hv_dot, std::size_t ones, double norm) {
  if (ones == 0 || norm == 0.0) return 0.0;
  return hv_dot / (std::sqrt(static_cast<double>(ones)) * norm);
}

// One pass of the update rule over `samples`. `toward` receives samples that
// are closer to `away`; returns the number of updates applied.
std::size_t refine_pass(std::span<const BitHypervector> samples, Prototype& toward,
                        Prototype& away, double alpha) {
  std::size_t updates = 0;
  for (const BitHypervector& hv : samples) {
    const std::size_t ones = hv.popcount();
    const double dot_toward = dot(hv, toward.values);
    const double dot_away = dot(hv, away.values);
    const double sim_toward = cosine_from_dot(dot_toward, ones, toward.norm());
    const double sim_away = cosine_from_dot(dot_away, ones, away.norm());
    if (sim_toward < sim_away) {
      toward.add(alpha, hv, dot_toward, ones, Sign::kPlus);
      away.add(alpha, hv, dot_away, ones, Sign::kMinus);
      ++updates;
    }
  }
  return updates;
}

}  // namespace

SimilarityModel train(std::span<const BitHypervector> normal_enc,
                      std::span<const BitHypervector> shuf_enc, const TrainConfig& cfg) {
  // alpha = 0 is allowed here (a no-op refinement); user-facing configs go
  // through TrainConfig::validate, which requires alpha > 0.
  if (!(cfg.alpha >= 0.0) || !std::isfinite(cfg.alpha) || cfg.epochs == 0) {
    throw Error(ErrorKind::kConfig, "train: alpha must be finite and >= 0, epochs >= 1");
  }
  if (normal_enc.empty() || shuf_enc.empty()) {
    throw Error(ErrorKind::kEmptySubset, "train: normal and shuffled sets must be non-empty");
  }
  const std::size_t dim = normal_enc.front().dim();
  const auto wrong_dim = [dim](const BitHypervector& hv) { return hv.dim() != dim; };
  if (std::any_of(normal_enc.begin(), normal_enc.end(), wrong_dim) ||
      std::any_of(shuf_enc.begin(), shuf_enc.end(), wrong_dim)) {
    throw Error(ErrorKind::kDimension, "train: encoded samples have mixed dimensions");
  }

  Prototype norm{init_similarity(normal_enc)};
  Prototype shuf{init_similarity(shuf_enc)};
  std::vector<std::size_t> updates;
  updates.reserve(cfg.epochs);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    norm.refresh();
    shuf.refresh();
    std::size_t count = refine_pass(normal_enc, norm, shuf, cfg.alpha);
    if (cfg.symmetric_updates) {
      count += refine_pass(shuf_enc, shuf, norm, cfg.alpha);
    }
    updates.push_back(count);
  }
  return SimilarityModel{std::move(norm.values), std::move(shuf.values), cfg, std::move(updates)};
}

Scores score(const SimilarityModel& model, const BitHypervector& hv) {
  return Scores{cosine_similarity(hv, model.s_norm), cosine_similarity(hv, model.s_shuf)};
}

Label decide(const TrainConfig& cfg, const Scores& scores) noexcept {
  const bool normal = cfg.mode == DecisionMode::kComparative
                          ? scores.sim_norm >= scores.sim_shuf
                          : scores.sim_norm > cfg.threshold;
  return normal ? Label::kNormal : Label::kAnomalous;
}

Decision classify(const SimilarityModel& model, const BitHypervector& hv) {
  const Scores scores = score(model, hv);
  return Decision{decide(model.config, scores), scores};
}

}  // namespace hdx
