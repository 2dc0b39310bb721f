#pragma once

// Detection metrics (anomalous is the positive class), absolute-threshold
// sweeps over normal-prototype similarity, and the comparison against the
// published NSL-KDD accuracy figures.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "hdx/hypervector.hpp"
#include "hdx/label.hpp"
#include "hdx/oneclass.hpp"

namespace hdx {

struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  [[nodiscard]] std::size_t total() const noexcept { return tp + fp + tn + fn; }

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct Metrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  ConfusionMatrix confusion;
};

Metrics metrics_from_confusion(const ConfusionMatrix& cm);

// Throws Error(kInvalidArgument) on empty input or a length mismatch.
Metrics compute_metrics(std::span<const Label> predictions, std::span<const Label> labels);

struct SweepPoint {
  double threshold = 0.0;
  std::size_t predicted_normal = 0;
  Metrics metrics;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  std::size_t best_index = 0;  // highest accuracy, lowest threshold on ties

  [[nodiscard]] const SweepPoint& best() const { return points.at(best_index); }
};

// A record is normal at threshold t iff its score > t.
SweepResult threshold_sweep(std::span<const double> scores, std::span<const Label> labels,
                            std::span<const double> grid);

// Scores every record against model.s_norm, then sweeps.
SweepResult threshold_sweep(const SimilarityModel& model, std::span<const BitHypervector> encoded,
                            std::span<const Label> labels, std::span<const double> grid);

// `points` evenly spaced thresholds from min(scores) to max(scores).
std::vector<double> default_grid(std::span<const double> scores, std::size_t points = 101);

enum class Split { kTrainPlus, kTestPlus, kTest21 };

std::string_view split_name(Split split) noexcept;
// Accepts the canonical names plus file-style spellings ("KDDTest-21",
// "test21", ...). Returns nullopt for anything else.
std::optional<Split> parse_split(std::string_view name) noexcept;

struct BaselineRow {
  std::string_view model_name;
  double acc_test_plus;
  double acc_test_21;
};

// Published accuracies (%) on KDDTest+ and KDDTest-21.
inline constexpr std::array<BaselineRow, 8> kPublishedBaselines{{
    {"J48", 81.05, 63.97},
    {"Naive Bayes", 76.56, 55.77},
    {"NB Tree", 82.02, 66.16},
    {"Random Forest", 80.67, 63.26},
    {"Random Tree", 81.59, 58.51},
    {"Multi-layer Perceptron", 77.41, 57.34},
    {"SVM", 69.52, 42.29},
    {"Proposed Method", 86.21, 81.75},
}};

// Published accuracy (%) on KDDTrain+.
inline constexpr double kPublishedTrainPlusAccuracy = 91.55;

[[nodiscard]] const BaselineRow& published_hdc_row() noexcept;
[[nodiscard]] const BaselineRow& best_published_baseline() noexcept;  // excluding the HDC row

// Published target for a split, in percent.
double published_target(Split split) noexcept;

struct MeasuredAccuracy {
  Split split;
  double accuracy_percent;
};

struct ComparisonEntry {
  Split split;
  double measured_percent;
  double target_percent;
  double delta_percent;  // measured - target
  // Published baselines the measurement beats (test splits only).
  std::vector<std::string_view> beats;
};

struct BaselineComparison {
  std::vector<ComparisonEntry> entries;
};

BaselineComparison baseline_report(std::span<const MeasuredAccuracy> measured);

std::string render_comparison_text(const BaselineComparison& comparison);
nlohmann::json comparison_to_json(const BaselineComparison& comparison);
nlohmann::json metrics_to_json(const Metrics& metrics);

// threshold,predicted_normal,accuracy,precision,recall,f1,tp,fp,tn,fn
std::string render_sweep_csv(const SweepResult& sweep);

// Shortest round-trip decimal form of a double.
std::string format_double(double value);

}  // namespace hdx
