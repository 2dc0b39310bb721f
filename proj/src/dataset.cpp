#include "hdx/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "hdx/error.hpp"

namespace hdx {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_double(std::string_view s) {
  double value = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::optional<int> parse_int(std::string_view s) {
  int value = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

}  // namespace

Label label_from_string(std::string_view name) noexcept {
  return trim(name) == "normal" ? Label::kNormal : Label::kAnomalous;
}

std::string_view label_name(Label label) noexcept {
  return label == Label::kNormal ? "normal" : "anomalous";
}

RecordSchema RecordSchema::nslkdd() {
  return RecordSchema{
      {"duration",
       "protocol_type",
       "service",
       "flag",
       "src_bytes",
       "dst_bytes",
       "land",
       "wrong_fragment",
       "urgent",
       "hot",
       "num_failed_logins",
       "logged_in",
       "num_compromised",
       "root_shell",
       "su_attempted",
       "num_root",
       "num_file_creations",
       "num_shells",
       "num_access_files",
       "num_outbound_cmds",
       "is_host_login",
       "is_guest_login",
       "count",
       "srv_count",
       "serror_rate",
       "srv_serror_rate",
       "rerror_rate",
       "srv_rerror_rate",
       "same_srv_rate",
       "diff_srv_rate",
       "srv_diff_host_rate",
       "dst_host_count",
       "dst_host_srv_count",
       "dst_host_same_srv_rate",
       "dst_host_diff_srv_rate",
       "dst_host_same_src_port_rate",
       "dst_host_srv_diff_host_rate",
       "dst_host_serror_rate",
       "dst_host_srv_serror_rate",
       "dst_host_rerror_rate",
       "dst_host_srv_rerror_rate"},
      {1, 2, 3}};
}

bool RecordSchema::is_categorical(std::size_t feature) const noexcept {
  return std::find(categorical_indices.begin(), categorical_indices.end(), feature) !=
         categorical_indices.end();
}

std::string_view RawTable::field(std::size_t row, std::size_t feature) const {
  const std::size_t k = row * n_features_ + feature;
  return std::string_view(text_).substr(offsets_[k], offsets_[k + 1] - offsets_[k]);
}

std::vector<std::string_view> RawTable::features(std::size_t row) const {
  std::vector<std::string_view> out(n_features_);
  for (std::size_t f = 0; f < n_features_; ++f) out[f] = field(row, f);
  return out;
}

void RawTable::add_row(std::span<const std::string_view> features, std::string_view label,
                       std::optional<int> difficulty) {
  if (features.size() != n_features_) {
    throw Error(ErrorKind::kSchema, "RawTable: wrong number of feature fields");
  }
  for (const std::string_view f : features) {
    text_.append(f);
    if (text_.size() > std::numeric_limits<std::uint32_t>::max()) {
      throw Error(ErrorKind::kIo, "RawTable: input exceeds 4 GiB of field text");
    }
    offsets_.push_back(static_cast<std::uint32_t>(text_.size()));
  }
  labels_.emplace_back(label);
  difficulty_.push_back(difficulty);
}

RawTable parse_nslkdd(std::istream& in, const RecordSchema& schema,
                      const std::string& source_name) {
  const std::size_t n = schema.n_features();
  RawTable table(n);
  std::string line;
  std::vector<std::string_view> fields;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (text.empty()) continue;

    fields.clear();
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = text.find(',', start);
      fields.push_back(trim(text.substr(start, comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != n + 1 && fields.size() != n + 2) {
      throw Error(ErrorKind::kParse, source_name + ":" + std::to_string(line_no) + ": expected " +
                                         std::to_string(n + 1) + " or " + std::to_string(n + 2) +
                                         " fields, got " + std::to_string(fields.size()));
    }
    std::optional<int> difficulty;
    if (fields.size() == n + 2) {
      difficulty = parse_int(fields[n + 1]);
      if (!difficulty) {
        throw Error(ErrorKind::kParse, source_name + ":" + std::to_string(line_no) +
                                           ": difficulty field is not an integer");
      }
    }
    table.add_row(std::span(fields).first(n), fields[n], difficulty);
  }
  if (in.bad()) {
    throw Error(ErrorKind::kIo, source_name + ": read failed");
  }
  return table;
}

RawTable load_nslkdd(const std::string& path, const RecordSchema& schema) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kIo, "cannot open " + path);
  }
  return parse_nslkdd(in, schema, path);
}

FeatureSpec FeatureSpec::continuous(double min, double max) {
  FeatureSpec spec;
  spec.kind = Kind::kContinuous;
  spec.min = min;
  spec.max = max;
  return spec;
}

FeatureSpec FeatureSpec::categorical(std::vector<std::string> vocabulary) {
  FeatureSpec spec;
  spec.kind = Kind::kCategorical;
  spec.vocabulary = std::move(vocabulary);
  return spec;
}

void FeatureSpec::validate() const {
  if (kind == Kind::kContinuous) {
    if (!std::isfinite(min) || !std::isfinite(max) || min > max) {
      throw Error(ErrorKind::kSchema, "feature spec: need finite min <= max");
    }
    return;
  }
  if (vocabulary.empty()) {
    throw Error(ErrorKind::kSchema, "feature spec: empty vocabulary");
  }
  if (std::adjacent_find(vocabulary.begin(), vocabulary.end(),
                         [](const auto& a, const auto& b) { return !(a < b); }) !=
      vocabulary.end()) {
    throw Error(ErrorKind::kSchema, "feature spec: vocabulary must be sorted and unique");
  }
}

std::vector<FeatureSpec> fit_feature_specs(const RawTable& train, const RecordSchema& schema) {
  if (train.rows() == 0) {
    throw Error(ErrorKind::kEmptySubset, "fit_feature_specs: no training rows");
  }
  if (train.n_features() != schema.n_features()) {
    throw Error(ErrorKind::kSchema, "fit_feature_specs: table arity does not match schema");
  }
  std::vector<FeatureSpec> specs;
  specs.reserve(schema.n_features());
  for (std::size_t f = 0; f < schema.n_features(); ++f) {
    if (schema.is_categorical(f)) {
      std::vector<std::string> vocab;
      for (std::size_t r = 0; r < train.rows(); ++r) vocab.emplace_back(train.field(r, f));
      std::sort(vocab.begin(), vocab.end());
      vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());
      specs.push_back(FeatureSpec::categorical(std::move(vocab)));
      continue;
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < train.rows(); ++r) {
      const auto value = parse_double(train.field(r, f));
      if (!value) {
        throw Error(ErrorKind::kParse, "row " + std::to_string(r) + ", feature " +
                                           schema.feature_names[f] + ": not a number: '" +
                                           std::string(train.field(r, f)) + "'");
      }
      lo = std::min(lo, *value);
      hi = std::max(hi, *value);
    }
    specs.push_back(FeatureSpec::continuous(lo, hi));
  }
  return specs;
}

std::vector<double> normalize_record(std::span<const std::string_view> fields,
                                     std::span<const FeatureSpec> specs, NormalizeStats* stats) {
  if (fields.size() != specs.size()) {
    throw Error(ErrorKind::kSchema, "normalize_record: expected " + std::to_string(specs.size()) +
                                        " features, got " + std::to_string(fields.size()));
  }
  std::vector<double> out(fields.size(), 0.0);
  for (std::size_t f = 0; f < fields.size(); ++f) {
    const FeatureSpec& spec = specs[f];
    if (spec.kind == FeatureSpec::Kind::kCategorical) {
      const auto it = std::lower_bound(spec.vocabulary.begin(), spec.vocabulary.end(), fields[f]);
      if (it == spec.vocabulary.end() || *it != fields[f]) {
        if (stats != nullptr) ++stats->unseen_categories;
        continue;
      }
      const auto index = static_cast<double>(it - spec.vocabulary.begin());
      const auto denom = static_cast<double>(std::max<std::size_t>(1, spec.vocabulary.size() - 1));
      out[f] = index / denom;
      continue;
    }
    const auto value = parse_double(fields[f]);
    if (!value) {
      throw Error(ErrorKind::kParse, "feature " + std::to_string(f) + ": not a number: '" +
                                         std::string(fields[f]) + "'");
    }
    if (spec.max > spec.min) {
      out[f] = std::clamp((*value - spec.min) / (spec.max - spec.min), 0.0, 1.0);
    }
  }
  return out;
}

std::size_t LabeledDataset::count(Label label) const noexcept {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

LabeledDataset normalize_table(const RawTable& raw, std::span<const FeatureSpec> specs,
                               NormalizeStats* stats) {
  if (raw.n_features() != specs.size()) {
    throw Error(ErrorKind::kSchema, "data has " + std::to_string(raw.n_features()) +
                                        " features but the model expects " +
                                        std::to_string(specs.size()));
  }
  LabeledDataset ds;
  ds.rows = RecordMatrix(specs.size());
  ds.rows.reserve_rows(raw.rows());
  ds.labels.reserve(raw.rows());
  ds.source_labels.reserve(raw.rows());
  ds.difficulty.reserve(raw.rows());
  for (std::size_t r = 0; r < raw.rows(); ++r) {
    const auto fields = raw.features(r);
    try {
      ds.rows.append_row(normalize_record(fields, specs, stats));
    } catch (const Error& e) {
      throw Error(e.kind(), "row " + std::to_string(r) + ": " + e.what());
    }
    ds.labels.push_back(label_from_string(raw.source_label(r)));
    ds.source_labels.push_back(raw.source_label(r));
    ds.difficulty.push_back(raw.difficulty(r));
  }
  return ds;
}

namespace {

LabeledDataset select_rows(const LabeledDataset& ds, const std::vector<std::size_t>& keep) {
  LabeledDataset out;
  out.rows = RecordMatrix(ds.rows.cols());
  out.rows.reserve_rows(keep.size());
  for (const std::size_t r : keep) {
    out.rows.append_row(ds.rows.row(r));
    out.labels.push_back(ds.labels[r]);
    out.source_labels.push_back(ds.source_labels[r]);
    out.difficulty.push_back(ds.difficulty[r]);
  }
  return out;
}

}  // namespace

LabeledDataset extract_normal_subset(const LabeledDataset& ds) {
  std::vector<std::size_t> keep;
  for (std::size_t r = 0; r < ds.size(); ++r) {
    if (ds.labels[r] == Label::kNormal) keep.push_back(r);
  }
  if (keep.empty()) {
    throw Error(ErrorKind::kEmptySubset, "no normal records to train on");
  }
  return select_rows(ds, keep);
}

LabeledDataset take_first(const LabeledDataset& ds, std::size_t limit) {
  std::vector<std::size_t> keep(std::min(limit, ds.size()));
  for (std::size_t r = 0; r < keep.size(); ++r) keep[r] = r;
  return select_rows(ds, keep);
}

LabeledDataset column_shuffle(const LabeledDataset& ds, SeededRng& rng) {
  if (ds.size() == 0) {
    throw Error(ErrorKind::kEmptySubset, "column_shuffle: empty dataset");
  }
  LabeledDataset out;
  out.rows = ds.rows;
  const std::size_t n = ds.size();
  for (std::size_t c = 0; c < out.rows.cols(); ++c) {
    for (std::size_t i = n - 1; i > 0; --i) {
      const std::size_t j = rng.uniform_below(i + 1);
      std::swap(out.rows.at(i, c), out.rows.at(j, c));
    }
  }
  out.labels.assign(n, Label::kAnomalous);
  out.source_labels.assign(n, "shuffled");
  out.difficulty.assign(n, std::nullopt);
  return out;
}

void write_normalized_csv(std::ostream& out, const LabeledDataset& ds, const RecordSchema& schema) {
  for (const auto& name : schema.feature_names) out << name << ',';
  out << "label\n";
  char buf[32];
  for (std::size_t r = 0; r < ds.size(); ++r) {
    for (const double v : ds.rows.row(r)) {
      const auto res = std::to_chars(buf, buf + sizeof(buf), v);
      out.write(buf, res.ptr - buf);
      out << ',';
    }
    out << label_name(ds.labels[r]) << '\n';
  }
}

}  // namespace hdx
