#include "hdx/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <numeric>
#include <string>
#include <thread>

#include "json.hpp"

#include "hdx/error.hpp"

namespace hdx {

void EncoderConfig::validate() const {
  if (dim == 0) throw Error(ErrorKind::kConfig, "encoder: dim must be positive");
  if (levels < 2) throw Error(ErrorKind::kConfig, "encoder: levels must be at least 2");
  if (dim < levels) throw Error(ErrorKind::kConfig, "encoder: dim must be at least levels");
  if (n_features == 0) throw Error(ErrorKind::kConfig, "encoder: n_features must be positive");
}

std::vector<BitHypervector> build_base_table(const EncoderConfig& config, SeededRng& rng) {
  config.validate();
  std::vector<BitHypervector> table;
  table.reserve(config.n_features);
  for (std::size_t i = 0; i < config.n_features; ++i) {
    table.push_back(random_hv(config.dim, rng));
  }
  return table;
}

std::vector<BitHypervector> build_level_ladder(const EncoderConfig& config, SeededRng& rng) {
  config.validate();
  const std::size_t flips = config.dim / config.levels;
  std::vector<BitHypervector> ladder;
  ladder.reserve(config.levels);
  ladder.push_back(random_hv(config.dim, rng));

  std::vector<std::size_t> positions(config.dim);
  for (std::size_t level = 1; level < config.levels; ++level) {
    BitHypervector next = ladder.back();
    // Partial Fisher-Yates over a fresh identity permutation: the first
    // `flips` slots end up as a uniform sample without replacement.
    std::iota(positions.begin(), positions.end(), std::size_t{0});
    for (std::size_t i = 0; i < flips; ++i) {
      const std::size_t j = i + rng.uniform_below(config.dim - i);
      std::swap(positions[i], positions[j]);
      next.flip(positions[i]);
    }
    ladder.push_back(std::move(next));
  }
  return ladder;
}

std::size_t quantize(double value, std::size_t levels) {
  const double clamped = std::clamp(value, 0.0, 1.0);
  const auto index = static_cast<std::size_t>(std::floor(clamped * static_cast<double>(levels)));
  return std::min(index, levels - 1);
}

Encoder::Encoder(const EncoderConfig& config) : config_(config) {
  config_.validate();
  SeededRng rng = SeededRng(config_.seed).derive(kStreamEncoder);
  base_ = build_base_table(config_, rng);
  ladder_ = build_level_ladder(config_, rng);
  precompute_bound();
}

Encoder::Encoder(const EncoderConfig& config, std::vector<BitHypervector> base_table,
                 std::vector<BitHypervector> level_ladder)
    : config_(config), base_(std::move(base_table)), ladder_(std::move(level_ladder)) {
  config_.validate();
  check_tables();
  precompute_bound();
}

void Encoder::check_tables() const {
  if (base_.size() != config_.n_features || ladder_.size() != config_.levels) {
    throw Error(ErrorKind::kSchema, "encoder: table sizes do not match config");
  }
  const auto wrong_dim = [&](const BitHypervector& hv) { return hv.dim() != config_.dim; };
  if (std::any_of(base_.begin(), base_.end(), wrong_dim) ||
      std::any_of(ladder_.begin(), ladder_.end(), wrong_dim)) {
    throw Error(ErrorKind::kDimension, "encoder: table vector dimension does not match config");
  }
}

void Encoder::precompute_bound() {
  bound_.clear();
  bound_.reserve(config_.n_features * config_.levels);
  for (const BitHypervector& base : base_) {
    for (const BitHypervector& level : ladder_) {
      bound_.push_back(xor_bind(base, level));
    }
  }
}

BitHypervector Encoder::encode(std::span<const double> features) const {
  if (features.size() != config_.n_features) {
    throw Error(ErrorKind::kSchema, "encode: expected " + std::to_string(config_.n_features) +
                                        " features, got " + std::to_string(features.size()));
  }
  std::vector<const BitHypervector*> parts(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (!std::isfinite(features[i])) {
      throw Error(ErrorKind::kInvalidArgument,
                  "encode: non-finite value for feature " + std::to_string(i));
    }
    parts[i] = &bound(i, quantize(features[i], config_.levels));
  }
  return majority_bundle(parts);
}

std::vector<BitHypervector> encode_dataset(const Encoder& encoder, const RecordMatrix& records,
                                           unsigned threads) {
  const std::size_t n = records.rows();
  std::vector<BitHypervector> out(n, BitHypervector(encoder.config().dim));
  if (n == 0) return out;
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));

  // Each worker owns a contiguous block of rows; the lowest failing row wins
  // so the reported error does not depend on scheduling.
  std::vector<std::size_t> failed_row(threads, n);
  std::vector<std::exception_ptr> failure(threads);
  const auto work = [&](unsigned t) {
    const std::size_t begin = n * t / threads;
    const std::size_t end = n * (t + 1) / threads;
    for (std::size_t i = begin; i < end; ++i) {
      try {
        out[i] = encoder.encode(records.row(i));
      } catch (...) {
        failed_row[t] = i;
        failure[t] = std::current_exception();
        return;
      }
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }

  const auto first = std::min_element(failed_row.begin(), failed_row.end());
  if (*first != n) {
    const auto t = static_cast<std::size_t>(first - failed_row.begin());
    try {
      std::rethrow_exception(failure[t]);
    } catch (const Error& e) {
      throw Error(e.kind(), "row " + std::to_string(*first) + ": " + e.what());
    }
  }
  return out;
}

namespace {

nlohmann::json vector_to_json(const BitHypervector& hv) {
  std::string hex;
  hex.reserve(hv.word_count() * 16);
  char buf[17];
  for (const std::uint64_t w : hv.words()) {
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(w));
    hex += buf;
  }
  return hex;
}

BitHypervector vector_from_json(const nlohmann::json& doc, std::size_t dim) {
  const auto& hex = doc.get_ref<const std::string&>();
  BitHypervector hv(dim);
  auto words = hv.mutable_words();
  if (hex.size() != words.size() * 16) {
    throw Error(ErrorKind::kSchema, "encoder: hex vector length does not match dim");
  }
  for (std::size_t w = 0; w < words.size(); ++w) {
    words[w] = std::stoull(hex.substr(w * 16, 16), nullptr, 16);
  }
  const std::uint64_t last = words.back();
  hv.clear_padding();
  if (hv.words().back() != last) {
    throw Error(ErrorKind::kSchema, "encoder: vector has bits set past dim");
  }
  return hv;
}

}  // namespace

nlohmann::json encoder_to_json(const Encoder& encoder) {
  const EncoderConfig& c = encoder.config();
  nlohmann::json doc;
  doc["dim"] = c.dim;
  doc["levels"] = c.levels;
  doc["n_features"] = c.n_features;
  doc["seed"] = c.seed;
  auto& base = doc["base_table"] = nlohmann::json::array();
  for (const auto& hv : encoder.base_table()) base.push_back(vector_to_json(hv));
  auto& ladder = doc["level_ladder"] = nlohmann::json::array();
  for (const auto& hv : encoder.level_ladder()) ladder.push_back(vector_to_json(hv));
  return doc;
}

Encoder encoder_from_json(const nlohmann::json& doc) {
  try {
    EncoderConfig c;
    c.dim = doc.at("dim").get<std::size_t>();
    c.levels = doc.at("levels").get<std::size_t>();
    c.n_features = doc.at("n_features").get<std::size_t>();
    c.seed = doc.at("seed").get<std::uint64_t>();
    c.validate();
    std::vector<BitHypervector> base;
    for (const auto& item : doc.at("base_table")) base.push_back(vector_from_json(item, c.dim));
    std::vector<BitHypervector> ladder;
    for (const auto& item : doc.at("level_ladder")) ladder.push_back(vector_from_json(item, c.dim));
    return Encoder(c, std::move(base), std::move(ladder));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("encoder: ") + e.what());
  } catch (const std::logic_error& e) {
    throw Error(ErrorKind::kParse, std::string("encoder: malformed hex word: ") + e.what());
  }
}

}  // namespace hdx
