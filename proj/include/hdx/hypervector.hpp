#pragma once

// Binary and real hypervector types plus the algebra the encoder and the
// one-class model are built from. Dimensions are runtime values; binary
// vectors pack bits little-endian into 64-bit words and keep every bit past
// dim() cleared.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hdx/rng.hpp"

namespace hdx {

class BitHypervector {
 public:
  static constexpr std::size_t kWordBits = 64;

  // All-zero vector. Throws Error(kDimension) when dim == 0.
  explicit BitHypervector(std::size_t dim);

  // Parses a string of '0'/'1' characters; character i becomes bit i.
  static BitHypervector from_string(std::string_view bits);

  static constexpr std::size_t words_for(std::size_t dim) noexcept {
    return (dim + kWordBits - 1) / kWordBits;
  }

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] std::size_t word_count() const noexcept { return words_.size(); }
  [[nodiscard]] std::span<const std::uint64_t> words() const noexcept { return words_; }

  // Mutable word access. Callers that write pad bits must call clear_padding().
  [[nodiscard]] std::span<std::uint64_t> mutable_words() noexcept { return words_; }
  void clear_padding() noexcept;

  [[nodiscard]] bool get(std::size_t bit) const;
  void set(std::size_t bit, bool value);
  void flip(std::size_t bit);

  [[nodiscard]] std::size_t popcount() const noexcept;
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const BitHypervector&, const BitHypervector&) = default;

 private:
  std::size_t dim_;
  std::vector<std::uint64_t> words_;
};

// Per-dimension integer counts, used to bundle binary vectors before
// thresholding.
class IntAccumulator {
 public:
  explicit IntAccumulator(std::size_t dim);

  [[nodiscard]] std::size_t dim() const noexcept { return values_.size(); }
  [[nodiscard]] std::span<const std::int64_t> values() const noexcept { return values_; }
  [[nodiscard]] std::span<std::int64_t> values() noexcept { return values_; }

 private:
  std::vector<std::int64_t> values_;
};

class RealHypervector {
 public:
  explicit RealHypervector(std::size_t dim);
  explicit RealHypervector(std::vector<double> values);

  // 0/1 bits as reals.
  static RealHypervector lift(const BitHypervector& hv);

  [[nodiscard]] std::size_t dim() const noexcept { return values_.size(); }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::span<double> values() noexcept { return values_; }

  friend bool operator==(const RealHypervector&, const RealHypervector&) = default;

 private:
  std::vector<double> values_;
};

enum class Sign : int { kPlus = 1, kMinus = -1 };

// Each bit independently uniform. Consumes ceil(dim / 64) draws from rng.
BitHypervector random_hv(std::size_t dim, SeededRng& rng);

BitHypervector xor_bind(const BitHypervector& a, const BitHypervector& b);

std::size_t hamming(const BitHypervector& a, const BitHypervector& b);

// acc[j] += bit j of hv.
void accumulate(IntAccumulator& acc, const BitHypervector& hv);

// Bit j set iff acc[j] >= n / 2 (so an exact tie at even n yields 1).
BitHypervector binarize_majority(const IntAccumulator& acc, std::size_t n);

// Fused accumulate + binarize_majority over `inputs` with n = inputs.size(),
// computed with bit-sliced counters a word at a time.
BitHypervector majority_bundle(std::span<const BitHypervector* const> inputs);

// Sum of s over the set bits of hv.
double dot(const BitHypervector& hv, const RealHypervector& s);

double euclidean_norm(const RealHypervector& s);

// dot(hv, s) / (|hv| * |s|), with 0 when either norm is 0. Throws on a
// dimension mismatch or non-finite entries in s.
double cosine_similarity(const BitHypervector& hv, const RealHypervector& s);

// Same as cosine_similarity with a precomputed euclidean_norm(s). No
// finiteness check; for hot loops that maintain the norm themselves.
double cosine_similarity(const BitHypervector& hv, const RealHypervector& s, double s_norm);

// s[j] += sign * alpha * bit j of hv.
void axpy(RealHypervector& s, double alpha, const BitHypervector& hv, Sign sign);

}  // namespace hdx
