#include "hdx/hypervector.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <string>

#include "hdx/error.hpp"

namespace hdx {
namespace {

constexpr std::size_t kWordBits = BitHypervector::kWordBits;

std::uint64_t tail_mask(std::size_t dim) noexcept {
  const std::size_t used = dim % kWordBits;
  return used == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << used) - 1;
}

void require_same_dim(std::size_t a, std::size_t b, const char* op) {
  if (a != b) {
    throw Error(ErrorKind::kDimension, std::string(op) + ": dimension mismatch (" +
                                           std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

void require_positive_dim(std::size_t dim, const char* what) {
  if (dim == 0) {
    throw Error(ErrorKind::kDimension, std::string(what) + ": dimension must be positive");
  }
}

}  // namespace

BitHypervector::BitHypervector(std::size_t dim) : dim_(dim), words_(words_for(dim), 0) {
  require_positive_dim(dim, "BitHypervector");
}

BitHypervector BitHypervector::from_string(std::string_view bits) {
  BitHypervector hv(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      hv.set(i, true);
    } else if (bits[i] != '0') {
      throw Error(ErrorKind::kParse, "BitHypervector: expected only '0' and '1' characters");
    }
  }
  return hv;
}

void BitHypervector::clear_padding() noexcept { words_.back() &= tail_mask(dim_); }

bool BitHypervector::get(std::size_t bit) const {
  if (bit >= dim_) {
    throw Error(ErrorKind::kDimension, "BitHypervector: bit index out of range");
  }
  return ((words_[bit / kWordBits] >> (bit % kWordBits)) & 1U) != 0;
}

void BitHypervector::set(std::size_t bit, bool value) {
  if (bit >= dim_) {
    throw Error(ErrorKind::kDimension, "BitHypervector: bit index out of range");
  }
  const std::uint64_t mask = std::uint64_t{1} << (bit % kWordBits);
  if (value) {
    words_[bit / kWordBits] |= mask;
  } else {
    words_[bit / kWordBits] &= ~mask;
  }
}

void BitHypervector::flip(std::size_t bit) {
  if (bit >= dim_) {
    throw Error(ErrorKind::kDimension, "BitHypervector: bit index out of range");
  }
  words_[bit / kWordBits] ^= std::uint64_t{1} << (bit % kWordBits);
}

std::size_t BitHypervector::popcount() const noexcept {
  std::size_t total = 0;
  for (const std::uint64_t w : words_) {
    total += static_cast<std::size_t>(std::popcount(w));
  }
  return total;
}

std::string BitHypervector::to_string() const {
  std::string out(dim_, '0');
  for (std::size_t i = 0; i < dim_; ++i) {
    if (get(i)) out[i] = '1';
  }
  return out;
}

IntAccumulator::IntAccumulator(std::size_t dim) : values_(dim, 0) {
  require_positive_dim(dim, "IntAccumulator");
}

RealHypervector::RealHypervector(std::size_t dim) : values_(dim, 0.0) {
  require_positive_dim(dim, "RealHypervector");
}

RealHypervector::RealHypervector(std::vector<double> values) : values_(std::move(values)) {
  require_positive_dim(values_.size(), "RealHypervector");
  for (const double v : values_) {
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::kInvalidArgument, "RealHypervector: non-finite value");
    }
  }
}

RealHypervector RealHypervector::lift(const BitHypervector& hv) {
  RealHypervector out(hv.dim());
  for (std::size_t i = 0; i < hv.dim(); ++i) {
    out.values_[i] = hv.get(i) ? 1.0 : 0.0;
  }
  return out;
}

BitHypervector random_hv(std::size_t dim, SeededRng& rng) {
  BitHypervector hv(dim);
  for (std::uint64_t& w : hv.mutable_words()) {
    w = rng.next_u64();
  }
  hv.clear_padding();
  return hv;
}

BitHypervector xor_bind(const BitHypervector& a, const BitHypervector& b) {
  require_same_dim(a.dim(), b.dim(), "xor_bind");
  BitHypervector out(a.dim());
  const auto lhs = a.words();
  const auto rhs = b.words();
  auto dst = out.mutable_words();
  for (std::size_t w = 0; w < dst.size(); ++w) {
    dst[w] = lhs[w] ^ rhs[w];
  }
  return out;
}

std::size_t hamming(const BitHypervector& a, const BitHypervector& b) {
  require_same_dim(a.dim(), b.dim(), "hamming");
  const auto lhs = a.words();
  const auto rhs = b.words();
  std::size_t total = 0;
  for (std::size_t w = 0; w < lhs.size(); ++w) {
    total += static_cast<std::size_t>(std::popcount(lhs[w] ^ rhs[w]));
  }
  return total;
}

void accumulate(IntAccumulator& acc, const BitHypervector& hv) {
  require_same_dim(acc.dim(), hv.dim(), "accumulate");
  auto values = acc.values();
  const auto words = hv.words();
  for (std::size_t w = 0; w < words.size(); ++w) {
    std::uint64_t bits = words[w];
    while (bits != 0) {
      values[w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits))] += 1;
      bits &= bits - 1;
    }
  }
}

BitHypervector binarize_majority(const IntAccumulator& acc, std::size_t n) {
  if (n == 0) {
    throw Error(ErrorKind::kInvalidArgument, "binarize_majority: n must be positive");
  }
  BitHypervector out(acc.dim());
  const auto values = acc.values();
  // H >= n/2  <=>  2H >= n, which avoids rounding the half.
  const auto n_signed = static_cast<std::int64_t>(n);
  auto words = out.mutable_words();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (2 * values[i] >= n_signed) {
      words[i / kWordBits] |= std::uint64_t{1} << (i % kWordBits);
    }
  }
  return out;
}

BitHypervector majority_bundle(std::span<const BitHypervector* const> inputs) {
  if (inputs.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "majority_bundle: no inputs");
  }
  const std::size_t dim = inputs.front()->dim();
  for (const BitHypervector* hv : inputs) {
    require_same_dim(dim, hv->dim(), "majority_bundle");
  }

  // Each bit position carries a (width + 1)-bit counter spread across bit
  // planes, preloaded with 2^width - threshold. The count reaches the
  // threshold exactly when the counter carries into the top plane.
  const std::size_t n = inputs.size();
  const std::size_t threshold = (n + 1) / 2;
  const auto width = static_cast<std::size_t>(std::bit_width(n));
  const std::uint64_t bias = (std::uint64_t{1} << width) - threshold;

  std::array<std::uint64_t, 65> initial{};
  for (std::size_t p = 0; p < width; ++p) {
    initial[p] = ((bias >> p) & 1U) != 0 ? ~std::uint64_t{0} : 0;
  }

  BitHypervector out(dim);
  auto dst = out.mutable_words();
  std::array<std::uint64_t, 65> planes{};
  for (std::size_t w = 0; w < dst.size(); ++w) {
    std::copy_n(initial.begin(), width + 1, planes.begin());
    for (const BitHypervector* hv : inputs) {
      std::uint64_t carry = hv->words()[w];
      for (std::size_t p = 0; p <= width && carry != 0; ++p) {
        const std::uint64_t next = planes[p] & carry;
        planes[p] ^= carry;
        carry = next;
      }
    }
    dst[w] = planes[width];
  }
  out.clear_padding();
  return out;
}

double dot(const BitHypervector& hv, const RealHypervector& s) {
  require_same_dim(hv.dim(), s.dim(), "dot");
  const auto words = hv.words();
  const auto values = s.values();
  // Four interleaved partial sums; the summation order is fixed so results
  // are reproducible run to run.
  std::array<double, 4> partial{};
  for (std::size_t w = 0; w < words.size(); ++w) {
    const std::uint64_t bits = words[w];
    if (bits == 0) continue;
    const std::size_t base = w * kWordBits;
    const std::size_t span = std::min(kWordBits, values.size() - base);
    for (std::size_t i = 0; i < span; ++i) {
      partial[i & 3] += ((bits >> i) & 1U) != 0 ? values[base + i] : 0.0;
    }
  }
  return (partial[0] + partial[1]) + (partial[2] + partial[3]);
}

double euclidean_norm(const RealHypervector& s) {
  double sum = 0.0;
  for (const double v : s.values()) {
    sum += v * v;
  }
  return std::sqrt(sum);
}

double cosine_similarity(const BitHypervector& hv, const RealHypervector& s) {
  require_same_dim(hv.dim(), s.dim(), "cosine_similarity");
  const double s_norm = euclidean_norm(s);
  if (!std::isfinite(s_norm)) {
    throw Error(ErrorKind::kInvalidArgument, "cosine_similarity: non-finite similarity vector");
  }
  return cosine_similarity(hv, s, s_norm);
}

double cosine_similarity(const BitHypervector& hv, const RealHypervector& s, double s_norm) {
  const std::size_t ones = hv.popcount();
  if (ones == 0 || s_norm == 0.0) {
    return 0.0;
  }
  return dot(hv, s) / (std::sqrt(static_cast<double>(ones)) * s_norm);
}

void axpy(RealHypervector& s, double alpha, const BitHypervector& hv, Sign sign) {
  require_same_dim(s.dim(), hv.dim(), "axpy");
  const double step = static_cast<double>(static_cast<int>(sign)) * alpha;
  auto values = s.values();
  const auto words = hv.words();
  for (std::size_t w = 0; w < words.size(); ++w) {
    std::uint64_t bits = words[w];
    while (bits != 0) {
      values[w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits))] += step;
      bits &= bits - 1;
    }
  }
}

}  // namespace hdx
