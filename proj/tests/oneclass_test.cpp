#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "hdx/error.hpp"
#include "hdx/oneclass.hpp"
#include "synthetic.hpp"

using hdx::BitHypervector;
using hdx::DecisionMode;
using hdx::Label;
using hdx::RealHypervector;
using hdx::TrainConfig;

namespace {

std::vector<BitHypervector> hvs(std::initializer_list<const char*> bits) {
  std::vector<BitHypervector> out;
  for (const char* b : bits) out.push_back(BitHypervector::from_string(b));
  return out;
}

std::vector<double> values(const RealHypervector& v) { return {v.values().begin(), v.values().end()}; }

hdx::SimilarityModel make_model(std::vector<double> s_norm, std::vector<double> s_shuf,
                                TrainConfig cfg = {}) {
  return hdx::SimilarityModel{RealHypervector(std::move(s_norm)), RealHypervector(std::move(s_shuf)),
                              cfg, {}};
}

}  // namespace

TEST_CASE("train config validation") {
  CHECK_NOTHROW(TrainConfig{}.validate());
  CHECK_THROWS_AS((TrainConfig{.alpha = 0.0}.validate()), hdx::Error);
  CHECK_THROWS_AS((TrainConfig{.alpha = -1.0}.validate()), hdx::Error);
  CHECK_THROWS_AS((TrainConfig{.alpha = NAN}.validate()), hdx::Error);
  CHECK_THROWS_AS((TrainConfig{.epochs = 0}.validate()), hdx::Error);
  CHECK_THROWS_AS((TrainConfig{.mode = DecisionMode::kAbsolute, .threshold = INFINITY}.validate()),
                  hdx::Error);
}

TEST_CASE("init_similarity") {
  CHECK(values(hdx::init_similarity(hvs({"1010"}))) == std::vector<double>{1, 0, 1, 0});
  CHECK(values(hdx::init_similarity(hvs({"1010", "0101"}))) == std::vector<double>{1, 1, 1, 1});
  CHECK(values(hdx::init_similarity(hvs({"1010", "1010", "1010", "1010", "1010"}))) ==
        std::vector<double>{5, 0, 5, 0});
  try {
    (void)hdx::init_similarity({});
    FAIL("expected empty-subset error");
  } catch (const hdx::Error& e) {
    CHECK(e.kind() == hdx::ErrorKind::kEmptySubset);
  }
}

TEST_CASE("score and classify") {
  const auto hv = BitHypervector::from_string("1010");
  const auto model = make_model({2, 0, 1, 0}, {0, 1, 0, 1});
  const auto s = hdx::score(model, hv);
  CHECK(s.sim_norm == doctest::Approx(3.0 / std::sqrt(10.0)).epsilon(1e-12));
  CHECK(s.sim_shuf == 0.0);
  CHECK(hdx::classify(model, hv).label == Label::kNormal);

  // A zero prototype scores 0 rather than NaN.
  const auto zero = make_model({1, 1, 1, 1}, {0, 0, 0, 0});
  CHECK(hdx::score(zero, hv).sim_shuf == 0.0);

  SUBCASE("comparative ties go to normal") {
    TrainConfig cfg;
    CHECK(hdx::decide(cfg, {0.5, 0.5}) == Label::kNormal);
    CHECK(hdx::decide(cfg, {0.4, 0.5}) == Label::kAnomalous);
    CHECK(hdx::decide(cfg, {0.6, 0.5}) == Label::kNormal);
  }
  SUBCASE("absolute threshold is strict") {
    const TrainConfig cfg{.mode = DecisionMode::kAbsolute, .threshold = 0.5};
    CHECK(hdx::decide(cfg, {0.5, 0.0}) == Label::kAnomalous);
    CHECK(hdx::decide(cfg, {0.5000001, 0.9}) == Label::kNormal);
    CHECK(hdx::decide(cfg, {0.2, 0.0}) == Label::kAnomalous);
  }
}

TEST_CASE("train golden trace") {
  // Frozen from tests/oracles/train_trace.py.
  const auto normal = hvs({"11110000", "11100001", "00001111", "11010010"});
  const auto shuffled = hvs({"00011110", "00101101", "10001011", "01000111"});
  const auto model = hdx::train(normal, shuffled, TrainConfig{.alpha = 0.02, .epochs = 2});
  const std::vector<double> s_norm{3, 3, 2, 2, 1.04, 1.04, 2.04, 2.04};
  const std::vector<double> s_shuf{1, 1, 1, 1, 2.96, 2.96, 2.96, 2.96};
  for (std::size_t j = 0; j < 8; ++j) {
    CHECK(model.s_norm.values()[j] == doctest::Approx(s_norm[j]).epsilon(1e-12));
    CHECK(model.s_shuf.values()[j] == doctest::Approx(s_shuf[j]).epsilon(1e-12));
  }
  CHECK(model.updates_per_epoch == std::vector<std::size_t>{1, 1});
  CHECK(model.config.epochs == 2);
}

TEST_CASE("train leaves prototypes alone when no sample is misranked") {
  const auto normal = hvs({"11110000", "11100000"});
  const auto shuffled = hvs({"00001111", "00000111"});
  const auto model = hdx::train(normal, shuffled, TrainConfig{.epochs = 3});
  CHECK(values(model.s_norm) == values(hdx::init_similarity(normal)));
  CHECK(values(model.s_shuf) == values(hdx::init_similarity(shuffled)));
  CHECK(model.updates_per_epoch == std::vector<std::size_t>{0, 0, 0});
}

TEST_CASE("updates conserve total mass") {
  for (int trial = 0; trial < 50; ++trial) {
    hdx::SeededRng rng(trial);
    std::vector<BitHypervector> normal, shuffled;
    for (int i = 0; i < 12; ++i) normal.push_back(hdx::random_hv(64, rng));
    for (int i = 0; i < 12; ++i) shuffled.push_back(hdx::random_hv(64, rng));
    const auto model = hdx::train(normal, shuffled, TrainConfig{.alpha = 0.5, .epochs = 4});
    const auto n0 = hdx::init_similarity(normal);
    const auto s0 = hdx::init_similarity(shuffled);
    // Every update moves the same amount out of s_shuf and into s_norm.
    for (std::size_t j = 0; j < 64; ++j) {
      CHECK(model.s_norm.values()[j] + model.s_shuf.values()[j] ==
            doctest::Approx(n0.values()[j] + s0.values()[j]).epsilon(1e-9));
    }
  }
}

TEST_CASE("train errors") {
  const auto a = hvs({"1010"});
  CHECK_THROWS_AS(hdx::train({}, a, {}), hdx::Error);
  CHECK_THROWS_AS(hdx::train(a, {}, {}), hdx::Error);
  try {
    (void)hdx::train(a, hvs({"10101"}), {});
    FAIL("expected dimension error");
  } catch (const hdx::Error& e) {
    CHECK(e.kind() == hdx::ErrorKind::kDimension);
  }
  CHECK_THROWS_AS(hdx::train(a, a, TrainConfig{.alpha = -0.1}), hdx::Error);
  CHECK_THROWS_AS(hdx::train(a, a, TrainConfig{.epochs = 0}), hdx::Error);
}

TEST_CASE("alpha = 0 leaves the initial prototypes") {
  const auto normal = hvs({"11110000", "11100001", "00001111", "11010010"});
  const auto shuffled = hvs({"00011110", "00101101", "10001011", "01000111"});
  const auto model = hdx::train(normal, shuffled, TrainConfig{.alpha = 0.0, .epochs = 3});
  CHECK(values(model.s_norm) == values(hdx::init_similarity(normal)));
  CHECK(values(model.s_shuf) == values(hdx::init_similarity(shuffled)));
  // The condition still fires; it just moves nothing.
  CHECK(model.updates_per_epoch == std::vector<std::size_t>{1, 1, 1});
}

TEST_CASE("a single update moves alpha * hv between the prototypes") {
  // In the golden trace only the third sample ("00001111") updates in epoch 1.
  const auto normal = hvs({"11110000", "11100001", "00001111", "11010010"});
  const auto shuffled = hvs({"00011110", "00101101", "10001011", "01000111"});
  const auto model = hdx::train(normal, shuffled, TrainConfig{.alpha = 0.02, .epochs = 1});
  REQUIRE(model.updates_per_epoch == std::vector<std::size_t>{1});
  const auto n0 = hdx::init_similarity(normal);
  const auto s0 = hdx::init_similarity(shuffled);
  for (std::size_t j = 0; j < 8; ++j) {
    const double expected = normal[2].get(j) ? 0.02 : 0.0;
    CHECK(model.s_norm.values()[j] - n0.values()[j] == doctest::Approx(expected).epsilon(1e-12));
    CHECK(s0.values()[j] - model.s_shuf.values()[j] == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("fit count does not fall across epochs") {
  // Normal samples are noisy copies of two cluster prototypes; the negatives
  // are noisy copies of two other prototypes. Counts the normal samples with
  // sim_norm >= sim_shuf after each epoch.
  constexpr std::size_t kDim = 1000;
  constexpr std::size_t kEpochs = 6;
  int monotone = 0;
  const int runs = 30;
  for (int seed = 0; seed < runs; ++seed) {
    hdx::SeededRng rng(1000 + seed);
    const auto a = hdx::random_hv(kDim, rng);
    const auto b = hdx::random_hv(kDim, rng);
    auto normal = synthetic::noisy_copies(a, 20, 50, rng);
    const auto more = synthetic::noisy_copies(b, 20, 50, rng);
    normal.insert(normal.end(), more.begin(), more.end());
    auto shuffled = synthetic::noisy_copies(hdx::random_hv(kDim, rng), 30, 50, rng);
    const auto other = synthetic::noisy_copies(b, 10, 50, rng);
    shuffled.insert(shuffled.end(), other.begin(), other.end());

    std::vector<std::size_t> fit;
    for (std::size_t e = 1; e <= kEpochs; ++e) {
      const auto model = hdx::train(normal, shuffled, TrainConfig{.alpha = 0.5, .epochs = e});
      std::size_t count = 0;
      for (const auto& hv : normal) {
        count += hdx::classify(model, hv).label == Label::kNormal ? 1 : 0;
      }
      fit.push_back(count);
    }
    monotone += std::is_sorted(fit.begin(), fit.end()) ? 1 : 0;
  }
  CHECK(monotone >= runs * 9 / 10);
}

TEST_CASE("prototype plus noise separates from random vectors at full dimension") {
  constexpr std::size_t kDim = 10000;
  hdx::SeededRng rng(2024);
  const auto proto = hdx::random_hv(kDim, rng);
  const auto normal = synthetic::noisy_copies(proto, 50, 100, rng);
  const auto negatives = synthetic::random_set(kDim, 50, rng);
  const auto model = hdx::train(normal, negatives, TrainConfig{});
  const auto test_normal = synthetic::noisy_copies(proto, 200, 100, rng);
  const auto test_random = synthetic::random_set(kDim, 200, rng);
  CHECK(synthetic::comparative_accuracy(model, test_normal, test_random) >= 0.99);
}

TEST_CASE("symmetric updates") {
  const auto normal = hvs({"11110000", "11100001", "00001111", "11010010"});
  const auto shuffled = hvs({"00011110", "00101101", "10001011", "01000111"});
  const TrainConfig cfg{.alpha = 0.02, .epochs = 2, .symmetric_updates = true};
  const auto a = hdx::train(normal, shuffled, cfg);
  const auto b = hdx::train(normal, shuffled, cfg);
  CHECK(values(a.s_norm) == values(b.s_norm));
  CHECK(values(a.s_shuf) == values(b.s_shuf));
  CHECK(a.updates_per_epoch.size() == 2);
  // The mirrored pass can only add updates on top of the one-sided pass.
  const auto one_sided = hdx::train(normal, shuffled, TrainConfig{.alpha = 0.02, .epochs = 2});
  CHECK(a.updates_per_epoch[0] >= one_sided.updates_per_epoch[0]);
}
