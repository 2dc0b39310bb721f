#pragma once

// End-to-end train / eval / sweep used by the command-line tool and the
// acceptance harness.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hdx/dataset.hpp"
#include "hdx/encoder.hpp"
#include "hdx/eval.hpp"
#include "hdx/oneclass.hpp"

namespace hdx {

struct RunConfig {
  std::size_t dim = 10000;
  std::size_t levels = 10;
  double alpha = 0.02;
  std::size_t epochs = 10;
  std::optional<std::uint64_t> seed;
  DecisionMode mode = DecisionMode::kComparative;
  std::optional<double> threshold;
  std::optional<std::size_t> normal_sample;
  bool symmetric_updates = false;
  std::string train_path;
  std::string test_path;
  std::string out_dir;
  // Encoding worker count; 0 = hardware concurrency. Never affects results.
  unsigned threads = 0;

  // Throws Error(kConfig) for a missing seed, an absolute mode without a
  // threshold, or invalid encoder/training parameters.
  void validate(std::size_t n_features) const;

  [[nodiscard]] EncoderConfig encoder_config(std::size_t n_features) const;
  [[nodiscard]] TrainConfig train_config() const;
};

std::string_view mode_name(DecisionMode mode) noexcept;
DecisionMode parse_mode(std::string_view name);

// Hyperparameters only; paths, threads and the output directory are left out
// so a model or report does not change with where it was produced.
nlohmann::json run_config_to_json(const RunConfig& config);
RunConfig run_config_from_json(const nlohmann::json& doc);

inline constexpr int kModelFormatVersion = 1;

struct ModelFile {
  RunConfig config;
  RecordSchema schema;
  std::vector<FeatureSpec> feature_specs;
  SimilarityModel model;

  [[nodiscard]] Encoder make_encoder() const;
};

nlohmann::json model_to_json(const ModelFile& file);
ModelFile model_from_json(const nlohmann::json& doc);

// Canonical text form: identical models serialize to identical bytes.
std::string serialize_model(const ModelFile& file);
void save_model(const ModelFile& file, const std::string& path);
ModelFile load_model(const std::string& path);

struct TrainSummary {
  std::size_t train_rows = 0;
  std::size_t normal_rows = 0;
  std::size_t shuffled_rows = 0;
  std::vector<std::size_t> updates_per_epoch;
};

struct TrainedPipeline {
  ModelFile file;
  TrainSummary summary;
};

// Fits specs on the whole table, trains on its normal rows (optionally the
// first normal_sample of them) against a column shuffle of the same rows.
TrainedPipeline train_pipeline(const RunConfig& config, const RawTable& train,
                               const RecordSchema& schema);

struct SplitEvaluation {
  std::string split;
  std::size_t records = 0;
  std::size_t unseen_categories = 0;
  std::vector<Label> labels;
  std::vector<Scores> scores;
  Metrics metrics;  // under the model's configured decision mode
  Metrics comparative;
  SweepResult sweep;
};

// grid empty = default 101-point grid over the observed sim_norm range.
SplitEvaluation evaluate_split(const ModelFile& model, const RawTable& data,
                               const std::string& split, const std::vector<double>& grid = {},
                               unsigned threads = 0);

// "auto" (default grid), "lo:hi:count", or a comma-separated list.
std::vector<double> parse_grid(const std::string& spec);

std::string render_report_text(const ModelFile& model, const SplitEvaluation& eval);
nlohmann::json report_to_json(const ModelFile& model, const SplitEvaluation& eval);

// Command bodies. Paths come from the config; progress goes to `log`.
TrainSummary cmd_train(const RunConfig& config, std::ostream& log);
// Writes <out>/<split>.report.txt, <split>.report.json and <split>.sweep.csv.
SplitEvaluation cmd_eval(const std::string& model_path, const std::string& data_path,
                         const std::string& split, const std::string& out_dir, std::ostream& log,
                         unsigned threads = 0);
// Writes <out>/<split>.sweep.csv and prints the best threshold.
SweepResult cmd_sweep(const std::string& model_path, const std::string& data_path,
                      const std::string& split, const std::string& grid_spec,
                      const std::string& out_dir, std::ostream& log, unsigned threads = 0);

inline constexpr const char* kModelFileName = "model.json";

}  // namespace hdx
