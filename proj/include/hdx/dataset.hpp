#pragma once

// NSL-KDD ingestion: raw comma-separated records, per-feature min/max and
// vocabulary statistics, [0, 1] normalization, the normal-only training
// subset, and column-shuffled synthetic negatives.

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hdx/label.hpp"
#include "hdx/matrix.hpp"
#include "hdx/rng.hpp"

namespace hdx {

struct RecordSchema {
  std::vector<std::string> feature_names;
  std::vector<std::size_t> categorical_indices;

  // The 41-feature NSL-KDD layout: protocol_type, service and flag are
  // categorical; field 41 is the label and an optional field 42 the
  // difficulty score.
  static RecordSchema nslkdd();

  [[nodiscard]] std::size_t n_features() const noexcept { return feature_names.size(); }
  [[nodiscard]] std::size_t label_column() const noexcept { return feature_names.size(); }
  [[nodiscard]] bool is_categorical(std::size_t feature) const noexcept;
};

// Records as parsed text. Feature fields are stored in one flat buffer and
// handed out as views.
class RawTable {
 public:
  explicit RawTable(std::size_t n_features) : n_features_(n_features) { offsets_.push_back(0); }

  [[nodiscard]] std::size_t rows() const noexcept { return labels_.size(); }
  [[nodiscard]] std::size_t n_features() const noexcept { return n_features_; }

  [[nodiscard]] std::string_view field(std::size_t row, std::size_t feature) const;
  [[nodiscard]] std::vector<std::string_view> features(std::size_t row) const;
  [[nodiscard]] const std::string& source_label(std::size_t row) const { return labels_[row]; }
  [[nodiscard]] std::optional<int> difficulty(std::size_t row) const { return difficulty_[row]; }

  void add_row(std::span<const std::string_view> features, std::string_view label,
               std::optional<int> difficulty);

 private:
  std::size_t n_features_;
  std::string text_;
  std::vector<std::uint32_t> offsets_;
  std::vector<std::string> labels_;
  std::vector<std::optional<int>> difficulty_;
};

// Reads comma-separated records with n_features + 1 (label) or n_features + 2
// (label, difficulty) fields. Blank lines are skipped. Throws Error(kIo) for
// an unreadable file and Error(kParse) naming the line for malformed rows.
RawTable load_nslkdd(const std::string& path, const RecordSchema& schema);
RawTable parse_nslkdd(std::istream& in, const RecordSchema& schema,
                      const std::string& source_name = "<stream>");

struct FeatureSpec {
  enum class Kind : std::uint8_t { kContinuous, kCategorical };

  Kind kind = Kind::kContinuous;
  double min = 0.0;
  double max = 0.0;
  std::vector<std::string> vocabulary;  // sorted, unique

  static FeatureSpec continuous(double min, double max);
  static FeatureSpec categorical(std::vector<std::string> vocabulary);

  // Throws Error(kSchema) if the invariants do not hold.
  void validate() const;

  friend bool operator==(const FeatureSpec&, const FeatureSpec&) = default;
};

std::vector<FeatureSpec> fit_feature_specs(const RawTable& train, const RecordSchema& schema);

struct NormalizeStats {
  std::size_t unseen_categories = 0;
};

// Continuous: (v - min) / (max - min) clamped to [0, 1], or 0 for a constant
// feature. Categorical: vocabulary index / max(1, size - 1), or 0 for a value
// never seen during fitting (counted in stats).
std::vector<double> normalize_record(std::span<const std::string_view> fields,
                                     std::span<const FeatureSpec> specs,
                                     NormalizeStats* stats = nullptr);

struct LabeledDataset {
  RecordMatrix rows;
  std::vector<Label> labels;
  std::vector<std::string> source_labels;
  std::vector<std::optional<int>> difficulty;

  [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
  [[nodiscard]] std::size_t count(Label label) const noexcept;

  friend bool operator==(const LabeledDataset&, const LabeledDataset&) = default;
};

LabeledDataset normalize_table(const RawTable& raw, std::span<const FeatureSpec> specs,
                               NormalizeStats* stats = nullptr);

// Rows labelled normal, in their original order. Throws Error(kEmptySubset)
// when there are none.
LabeledDataset extract_normal_subset(const LabeledDataset& ds);

// First `limit` rows (all rows if there are fewer).
LabeledDataset take_first(const LabeledDataset& ds, std::size_t limit);

// Permutes each column independently (Fisher-Yates, column 0 first). Every
// output row is labelled anomalous with source label "shuffled".
LabeledDataset column_shuffle(const LabeledDataset& ds, SeededRng& rng);

// Debug dump: header of feature names plus "label", then one row per record.
void write_normalized_csv(std::ostream& out, const LabeledDataset& ds, const RecordSchema& schema);

}  // namespace hdx
