#include "hdx/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <sstream>

#include "hdx/error.hpp"

namespace hdx {

Metrics metrics_from_confusion(const ConfusionMatrix& cm) {
  const auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  Metrics m;
  m.confusion = cm;
  m.accuracy = ratio(cm.tp + cm.tn, cm.total());
  m.precision = ratio(cm.tp, cm.tp + cm.fp);
  m.recall = ratio(cm.tp, cm.tp + cm.fn);
  m.f1 = (m.precision + m.recall) == 0.0
             ? 0.0
             : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

Metrics compute_metrics(std::span<const Label> predictions, std::span<const Label> labels) {
  if (predictions.empty() || predictions.size() != labels.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "compute_metrics: need equal, non-zero numbers of predictions and labels");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const bool predicted_anomaly = predictions[i] == Label::kAnomalous;
    const bool actual_anomaly = labels[i] == Label::kAnomalous;
    if (predicted_anomaly) {
      ++(actual_anomaly ? cm.tp : cm.fp);
    } else {
      ++(actual_anomaly ? cm.fn : cm.tn);
    }
  }
  return metrics_from_confusion(cm);
}

SweepResult threshold_sweep(std::span<const double> scores, std::span<const Label> labels,
                            std::span<const double> grid) {
  if (grid.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "threshold_sweep: empty threshold grid");
  }
  if (scores.empty() || scores.size() != labels.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "threshold_sweep: need equal, non-zero numbers of scores and labels");
  }
  SweepResult result;
  result.points.reserve(grid.size());
  std::vector<Label> predictions(scores.size());
  for (const double t : grid) {
    std::size_t normal = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const bool is_normal = scores[i] > t;
      predictions[i] = is_normal ? Label::kNormal : Label::kAnomalous;
      normal += is_normal ? 1 : 0;
    }
    result.points.push_back(SweepPoint{t, normal, compute_metrics(predictions, labels)});
  }
  for (std::size_t i = 1; i < result.points.size(); ++i) {
    const auto& cand = result.points[i];
    const auto& best = result.points[result.best_index];
    if (cand.metrics.accuracy > best.metrics.accuracy ||
        (cand.metrics.accuracy == best.metrics.accuracy && cand.threshold < best.threshold)) {
      result.best_index = i;
    }
  }
  return result;
}

SweepResult threshold_sweep(const SimilarityModel& model, std::span<const BitHypervector> encoded,
                            std::span<const Label> labels, std::span<const double> grid) {
  std::vector<double> scores;
  scores.reserve(encoded.size());
  for (const BitHypervector& hv : encoded) {
    scores.push_back(cosine_similarity(hv, model.s_norm));
  }
  return threshold_sweep(scores, labels, grid);
}

std::vector<double> default_grid(std::span<const double> scores, std::size_t points) {
  if (scores.empty() || points == 0) {
    throw Error(ErrorKind::kInvalidArgument, "default_grid: need scores and at least one point");
  }
  const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = points == 1 ? *lo
                          : *lo + (*hi - *lo) * static_cast<double>(i) /
                                      static_cast<double>(points - 1);
  }
  return grid;
}

std::string_view split_name(Split split) noexcept {
  switch (split) {
    case Split::kTrainPlus:
      return "train+";
    case Split::kTestPlus:
      return "test+";
    case Split::kTest21:
      return "test-21";
  }
  return "unknown";
}

std::optional<Split> parse_split(std::string_view name) noexcept {
  std::string key;
  for (const char c : name) {
    if (c == '-' || c == '_' || c == ' ') continue;
    key += static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
  }
  if (key.starts_with("kdd")) key.erase(0, 3);
  if (key == "train+" || key == "trainplus") return Split::kTrainPlus;
  if (key == "test+" || key == "testplus") return Split::kTestPlus;
  if (key == "test21") return Split::kTest21;
  return std::nullopt;
}

const BaselineRow& published_hdc_row() noexcept { return kPublishedBaselines.back(); }

const BaselineRow& best_published_baseline() noexcept {
  return *std::max_element(kPublishedBaselines.begin(), kPublishedBaselines.end() - 1,
                           [](const BaselineRow& a, const BaselineRow& b) {
                             return a.acc_test_plus < b.acc_test_plus;
                           });
}

double published_target(Split split) noexcept {
  switch (split) {
    case Split::kTrainPlus:
      return kPublishedTrainPlusAccuracy;
    case Split::kTestPlus:
      return published_hdc_row().acc_test_plus;
    case Split::kTest21:
      return published_hdc_row().acc_test_21;
  }
  return 0.0;
}

BaselineComparison baseline_report(std::span<const MeasuredAccuracy> measured) {
  BaselineComparison out;
  for (const MeasuredAccuracy& m : measured) {
    ComparisonEntry entry{m.split, m.accuracy_percent, published_target(m.split),
                          m.accuracy_percent - published_target(m.split), {}};
    if (m.split != Split::kTrainPlus) {
      for (std::size_t i = 0; i + 1 < kPublishedBaselines.size(); ++i) {
        const BaselineRow& row = kPublishedBaselines[i];
        const double published =
            m.split == Split::kTestPlus ? row.acc_test_plus : row.acc_test_21;
        if (m.accuracy_percent > published) entry.beats.push_back(row.model_name);
      }
    }
    out.entries.push_back(std::move(entry));
  }
  return out;
}

namespace {

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string signed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%+.2f", v);
  // Collapse "-0.00" so deltas that round to zero print consistently.
  return std::string(buf) == "-0.00" ? "+0.00" : buf;
}

}  // namespace

std::string render_comparison_text(const BaselineComparison& comparison) {
  std::ostringstream out;
  char line[160];
  out << "Published accuracy (%)\n";
  std::snprintf(line, sizeof(line), "  %-24s %8s %8s\n", "model", "test+", "test-21");
  out << line;
  for (const BaselineRow& row : kPublishedBaselines) {
    std::snprintf(line, sizeof(line), "  %-24s %8.2f %8.2f\n", std::string(row.model_name).c_str(),
                  row.acc_test_plus, row.acc_test_21);
    out << line;
  }
  std::snprintf(line, sizeof(line), "  %-24s %8.2f (train+)\n", "Proposed Method",
                kPublishedTrainPlusAccuracy);
  out << line;
  if (comparison.entries.empty()) return out.str();

  out << "\nThis run vs published HDC result\n";
  std::snprintf(line, sizeof(line), "  %-8s %9s %9s %8s\n", "split", "measured", "target", "delta");
  out << line;
  for (const ComparisonEntry& e : comparison.entries) {
    std::snprintf(line, sizeof(line), "  %-8s %9s %9s %8s\n",
                  std::string(split_name(e.split)).c_str(), fixed2(e.measured_percent).c_str(),
                  fixed2(e.target_percent).c_str(), signed2(e.delta_percent).c_str());
    out << line;
  }
  for (const ComparisonEntry& e : comparison.entries) {
    if (e.split == Split::kTrainPlus) continue;
    out << "  " << split_name(e.split) << " beats " << e.beats.size() << " of "
        << kPublishedBaselines.size() - 1 << " published baselines";
    if (!e.beats.empty()) {
      out << ':';
      for (std::size_t i = 0; i < e.beats.size(); ++i) out << (i == 0 ? " " : ", ") << e.beats[i];
    }
    out << '\n';
  }
  return out.str();
}

nlohmann::json comparison_to_json(const BaselineComparison& comparison) {
  nlohmann::json doc;
  auto& published = doc["published"] = nlohmann::json::array();
  for (const BaselineRow& row : kPublishedBaselines) {
    published.push_back({{"model", row.model_name},
                         {"test_plus", row.acc_test_plus},
                         {"test_21", row.acc_test_21}});
  }
  doc["published_train_plus"] = kPublishedTrainPlusAccuracy;
  auto& entries = doc["measured"] = nlohmann::json::array();
  for (const ComparisonEntry& e : comparison.entries) {
    nlohmann::json beats = nlohmann::json::array();
    for (const auto name : e.beats) beats.push_back(name);
    entries.push_back({{"split", split_name(e.split)},
                       {"measured", e.measured_percent},
                       {"target", e.target_percent},
                       {"delta", e.delta_percent},
                       {"beats", std::move(beats)}});
  }
  return doc;
}

nlohmann::json metrics_to_json(const Metrics& m) {
  return {{"accuracy", m.accuracy},
          {"precision", m.precision},
          {"recall", m.recall},
          {"f1", m.f1},
          {"confusion",
           {{"tp", m.confusion.tp}, {"fp", m.confusion.fp}, {"tn", m.confusion.tn},
            {"fn", m.confusion.fn}}}};
}

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string render_sweep_csv(const SweepResult& sweep) {
  std::ostringstream out;
  out << "threshold,predicted_normal,accuracy,precision,recall,f1,tp,fp,tn,fn\n";
  for (const SweepPoint& p : sweep.points) {
    const Metrics& m = p.metrics;
    out << format_double(p.threshold) << ',' << p.predicted_normal << ','
        << format_double(m.accuracy) << ',' << format_double(m.precision) << ','
        << format_double(m.recall) << ',' << format_double(m.f1) << ',' << m.confusion.tp << ','
        << m.confusion.fp << ',' << m.confusion.tn << ',' << m.confusion.fn << '\n';
  }
  return out.str();
}

}  // namespace hdx
