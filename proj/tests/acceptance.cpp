// Dataset-independent acceptance checks. Prints one PASS/FAIL line per
// criterion and exits non-zero if any fails.

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "hdx/dataset.hpp"
#include "hdx/encoder.hpp"
#include "hdx/oneclass.hpp"
#include "hdx/pipeline.hpp"
#include "naive_oracle.hpp"
#include "synthetic.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& check) {
  Outcome out;
  try {
    out = check();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  std::printf("%s criterion %d (%s): %s\n", out.pass ? "PASS" : "FAIL", id, name.c_str(),
              out.detail.c_str());
  std::fflush(stdout);
  failures += out.pass ? 0 : 1;
}

std::vector<double> real_values(hdx::SeededRng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) {
    x = static_cast<double>(static_cast<std::int64_t>(rng.uniform_below(2001)) - 1000) / 100.0;
  }
  return v;
}

std::vector<double> unit_values(hdx::SeededRng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = static_cast<double>(rng.uniform_below(1u << 20)) / (1u << 20);
  return v;
}

Outcome kernels_match_naive() {
  constexpr int kCases = 1000;
  hdx::SeededRng rng(404);
  std::size_t mismatches = 0;
  for (int c = 0; c < kCases; ++c) {
    const std::size_t dim = 1 + rng.uniform_below(256);
    const auto a = hdx::random_hv(dim, rng);
    const auto b = hdx::random_hv(dim, rng);
    const auto na = naive::unpack(a);
    const auto nb = naive::unpack(b);

    mismatches += naive::unpack(hdx::xor_bind(a, b)) != naive::xor_bits(na, nb);
    mismatches += hdx::hamming(a, b) != naive::hamming(na, nb);
    mismatches += a.popcount() != naive::popcount(na);

    const std::size_t n = 1 + rng.uniform_below(9);
    std::vector<hdx::BitHypervector> set;
    std::vector<naive::Bits> nset;
    hdx::IntAccumulator acc(dim);
    for (std::size_t i = 0; i < n; ++i) {
      set.push_back(hdx::random_hv(dim, rng));
      nset.push_back(naive::unpack(set.back()));
      hdx::accumulate(acc, set.back());
    }
    const auto sums = naive::sum(nset);
    mismatches += !std::equal(acc.values().begin(), acc.values().end(), sums.begin());
    const auto expected = naive::majority(sums, n);
    mismatches += naive::unpack(hdx::binarize_majority(acc, n)) != expected;
    std::vector<const hdx::BitHypervector*> ptrs;
    for (const auto& hv : set) ptrs.push_back(&hv);
    mismatches += naive::unpack(hdx::majority_bundle(ptrs)) != expected;

    auto values = real_values(rng, dim);
    const hdx::RealHypervector s(values);
    mismatches += std::abs(hdx::cosine_similarity(a, s) - naive::cosine(na, values)) > 1e-12;
    auto packed = s;
    hdx::axpy(packed, 0.02, a, hdx::Sign::kMinus);
    naive::axpy(values, 0.02, na, -1);
    mismatches += !std::equal(packed.values().begin(), packed.values().end(), values.begin());

    const std::size_t levels = 2 + rng.uniform_below(15);
    const double v = static_cast<double>(rng.uniform_below(1201)) / 1000.0 - 0.1;
    mismatches += hdx::quantize(v, levels) != naive::quantize(v, levels);

    const hdx::EncoderConfig cfg{.dim = std::max<std::size_t>(dim, levels),
                                 .levels = levels,
                                 .n_features = 1 + rng.uniform_below(12),
                                 .seed = rng.next_u64()};
    const hdx::Encoder enc(cfg);
    std::vector<naive::Bits> base, ladder;
    for (const auto& hv : enc.base_table()) base.push_back(naive::unpack(hv));
    for (const auto& hv : enc.level_ladder()) ladder.push_back(naive::unpack(hv));
    const auto record = unit_values(rng, cfg.n_features);
    mismatches += naive::unpack(enc.encode(record)) != naive::encode(base, ladder, record);
  }
  return {mismatches == 0, std::to_string(kCases) + " cases x 11 operations, " +
                               std::to_string(mismatches) + " mismatches"};
}

Outcome ladder_geometry() {
  const double expected = 10000.0 * (1.0 - std::pow(1.0 - 2.0 / 10.0, 9.0)) / 2.0;
  std::size_t bad_steps = 0;
  std::size_t lo = 10000, hi = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const hdx::EncoderConfig cfg{.dim = 10000, .levels = 10, .n_features = 41, .seed = seed};
    hdx::SeededRng rng(seed);
    const auto ladder = hdx::build_level_ladder(cfg, rng);
    for (std::size_t l = 1; l < ladder.size(); ++l) {
      bad_steps += hdx::hamming(ladder[l - 1], ladder[l]) != 1000;
    }
    const std::size_t end = hdx::hamming(ladder.front(), ladder.back());
    lo = std::min(lo, end);
    hi = std::max(hi, end);
  }
  const bool pass = bad_steps == 0 && lo >= 4029 && hi <= 4629;
  std::ostringstream d;
  d << "steps != 1000: " << bad_steps << "; endpoint range [" << lo << ", " << hi
    << "] over 20 seeds, expected " << std::lround(expected) << " +/- 300";
  return {pass, d.str()};
}

Outcome base_orthogonality() {
  const hdx::Encoder enc(hdx::EncoderConfig{.dim = 10000, .levels = 10, .n_features = 41, .seed = 0});
  const auto& base = enc.base_table();
  std::size_t lo = 10000, hi = 0;
  for (std::size_t i = 0; i < base.size(); ++i) {
    for (std::size_t j = i + 1; j < base.size(); ++j) {
      const std::size_t d = hdx::hamming(base[i], base[j]);
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
  }
  return {lo >= 4700 && hi <= 5300, "820 pairs in [" + std::to_string(lo) + ", " +
                                        std::to_string(hi) + "], band 5000 +/- 300"};
}

std::vector<double> sorted_column(const hdx::LabeledDataset& ds, std::size_t c) {
  std::vector<double> col;
  for (std::size_t r = 0; r < ds.size(); ++r) col.push_back(ds.rows.at(r, c));
  std::sort(col.begin(), col.end());
  return col;
}

Outcome shuffle_marginals() {
  std::vector<hdx::LabeledDataset> datasets;
  const auto schema = hdx::RecordSchema::nslkdd();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    std::istringstream in(fixtures::nslkdd_text({.rows = 50 * seed, .seed = seed}));
    const auto raw = hdx::parse_nslkdd(in, schema, "fixture");
    datasets.push_back(
        hdx::extract_normal_subset(hdx::normalize_table(raw, hdx::fit_feature_specs(raw, schema))));
  }
  hdx::SeededRng gen(8);
  for (std::size_t rows : {1, 2, 3, 17, 256}) {
    hdx::LabeledDataset ds;
    ds.rows = hdx::RecordMatrix(9);
    for (std::size_t r = 0; r < rows; ++r) {
      ds.rows.append_row(unit_values(gen, 9));
      ds.labels.push_back(hdx::Label::kNormal);
      ds.source_labels.emplace_back("normal");
      ds.difficulty.emplace_back(std::nullopt);
    }
    datasets.push_back(std::move(ds));
  }
  std::size_t columns = 0, broken = 0;
  for (std::size_t i = 0; i < datasets.size(); ++i) {
    hdx::SeededRng rng(i);
    const auto out = hdx::column_shuffle(datasets[i], rng);
    for (std::size_t c = 0; c < out.rows.cols(); ++c) {
      ++columns;
      broken += sorted_column(out, c) != sorted_column(datasets[i], c);
    }
  }
  return {broken == 0, std::to_string(datasets.size()) + " datasets, " + std::to_string(columns) +
                           " columns, " + std::to_string(broken) + " with changed marginals"};
}

Outcome separability() {
  constexpr std::size_t kDim = 10000;
  hdx::SeededRng rng(2024);
  const auto proto = hdx::random_hv(kDim, rng);
  const auto normal = synthetic::noisy_copies(proto, 50, 100, rng);
  const auto negatives = synthetic::random_set(kDim, 50, rng);
  const auto model = hdx::train(normal, negatives, hdx::TrainConfig{});
  const auto test_normal = synthetic::noisy_copies(proto, 500, 100, rng);
  const auto test_random = synthetic::random_set(kDim, 500, rng);
  const double acc = synthetic::comparative_accuracy(model, test_normal, test_random);
  return {acc >= 0.99, "accuracy " + hdx::format_double(acc) +
                           " on 1000 held-out vectors (10% bit noise vs random), need >= 0.99"};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome pipeline_determinism() {
  const fs::path root = fs::temp_directory_path() / ("hdx_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  fs::create_directories(root);
  std::ofstream(root / "KDDTrain+.txt") << fixtures::nslkdd_text({.rows = 300, .seed = 41});
  std::ofstream(root / "KDDTest+.txt") << fixtures::nslkdd_text({.rows = 150, .seed = 42});

  const std::vector<std::string> files{"model.json", "test+.report.txt", "test+.report.json",
                                       "test+.sweep.csv"};
  std::vector<std::vector<std::string>> runs;
  for (unsigned threads : {1u, 0u}) {
    hdx::RunConfig cfg;
    cfg.seed = 123;
    cfg.threads = threads;
    cfg.train_path = (root / "KDDTrain+.txt").string();
    cfg.out_dir = (root / ("run" + std::to_string(runs.size()))).string();
    std::ostringstream log;
    hdx::cmd_train(cfg, log);
    hdx::cmd_eval((fs::path(cfg.out_dir) / hdx::kModelFileName).string(),
                  (root / "KDDTest+.txt").string(), "test+", cfg.out_dir, log, threads);
    std::vector<std::string> contents;
    for (const auto& f : files) contents.push_back(slurp(fs::path(cfg.out_dir) / f));
    runs.push_back(std::move(contents));
  }
  fs::remove_all(root);
  std::size_t differing = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    differing += runs[0][i].empty() || runs[0][i] != runs[1][i];
  }
  return {differing == 0, "D=10000 defaults, 1 vs all threads: " + std::to_string(differing) +
                              " of " + std::to_string(files.size()) + " output files differ"};
}

Outcome golden_trace() {
  std::vector<hdx::BitHypervector> normal, shuffled;
  for (const char* b : {"11110000", "11100001", "00001111", "11010010"}) {
    normal.push_back(hdx::BitHypervector::from_string(b));
  }
  for (const char* b : {"00011110", "00101101", "10001011", "01000111"}) {
    shuffled.push_back(hdx::BitHypervector::from_string(b));
  }
  const auto model = hdx::train(normal, shuffled, hdx::TrainConfig{.alpha = 0.02, .epochs = 2});
  const std::vector<double> s_norm{3, 3, 2, 2, 1.04, 1.04, 2.04, 2.04};
  const std::vector<double> s_shuf{1, 1, 1, 1, 2.96, 2.96, 2.96, 2.96};
  double worst = 0.0;
  for (std::size_t j = 0; j < 8; ++j) {
    worst = std::max(worst, std::abs(model.s_norm.values()[j] - s_norm[j]));
    worst = std::max(worst, std::abs(model.s_shuf.values()[j] - s_shuf[j]));
  }
  const bool counts = model.updates_per_epoch == std::vector<std::size_t>{1, 1};
  return {worst <= 1e-12 && counts, "max deviation " + hdx::format_double(worst) +
                                        ", updates per epoch " + (counts ? "[1, 1]" : "differ")};
}

}  // namespace

int main() {
  report(4, "packed kernels match per-bit reference", kernels_match_naive);
  report(5, "level ladder geometry", ladder_geometry);
  report(6, "base table orthogonality", base_orthogonality);
  report(7, "column shuffle preserves marginals", shuffle_marginals);
  report(8, "synthetic separability", separability);
  report(9, "pipeline determinism", pipeline_determinism);
  report(10, "golden training trace", golden_trace);
  return failures == 0 ? 0 : 1;
}
