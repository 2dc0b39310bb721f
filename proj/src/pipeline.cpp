#include "hdx/pipeline.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hdx/error.hpp"

namespace hdx {

void RunConfig::validate(std::size_t n_features) const {
  if (!seed) {
    throw Error(ErrorKind::kConfig, "a seed is required (--seed, config file, or HDX_SEED)");
  }
  if (mode == DecisionMode::kAbsolute && !threshold) {
    throw Error(ErrorKind::kConfig, "absolute mode requires --threshold");
  }
  if (normal_sample && *normal_sample == 0) {
    throw Error(ErrorKind::kConfig, "normal-sample must be positive");
  }
  encoder_config(n_features).validate();
  train_config().validate();
}

EncoderConfig RunConfig::encoder_config(std::size_t n_features) const {
  return EncoderConfig{dim, levels, n_features, seed.value_or(0)};
}

TrainConfig RunConfig::train_config() const {
  return TrainConfig{alpha, epochs, mode, threshold.value_or(0.0), symmetric_updates};
}

std::string_view mode_name(DecisionMode mode) noexcept {
  return mode == DecisionMode::kComparative ? "comparative" : "absolute";
}

DecisionMode parse_mode(std::string_view name) {
  if (name == "comparative") return DecisionMode::kComparative;
  if (name == "absolute") return DecisionMode::kAbsolute;
  throw Error(ErrorKind::kConfig, "unknown mode '" + std::string(name) +
                                      "' (expected comparative or absolute)");
}

nlohmann::json run_config_to_json(const RunConfig& c) {
  nlohmann::json doc;
  doc["dim"] = c.dim;
  doc["levels"] = c.levels;
  doc["alpha"] = c.alpha;
  doc["epochs"] = c.epochs;
  doc["seed"] = c.seed ? nlohmann::json(*c.seed) : nlohmann::json(nullptr);
  doc["mode"] = mode_name(c.mode);
  doc["threshold"] = c.threshold ? nlohmann::json(*c.threshold) : nlohmann::json(nullptr);
  doc["normal_sample"] =
      c.normal_sample ? nlohmann::json(*c.normal_sample) : nlohmann::json(nullptr);
  doc["symmetric_updates"] = c.symmetric_updates;
  return doc;
}

RunConfig run_config_from_json(const nlohmann::json& doc) {
  RunConfig c;
  c.dim = doc.at("dim").get<std::size_t>();
  c.levels = doc.at("levels").get<std::size_t>();
  c.alpha = doc.at("alpha").get<double>();
  c.epochs = doc.at("epochs").get<std::size_t>();
  if (!doc.at("seed").is_null()) c.seed = doc.at("seed").get<std::uint64_t>();
  c.mode = parse_mode(doc.at("mode").get<std::string>());
  if (!doc.at("threshold").is_null()) c.threshold = doc.at("threshold").get<double>();
  if (!doc.at("normal_sample").is_null()) {
    c.normal_sample = doc.at("normal_sample").get<std::size_t>();
  }
  c.symmetric_updates = doc.at("symmetric_updates").get<bool>();
  return c;
}

Encoder ModelFile::make_encoder() const {
  return Encoder(config.encoder_config(feature_specs.size()));
}

namespace {

nlohmann::json spec_to_json(const FeatureSpec& spec) {
  if (spec.kind == FeatureSpec::Kind::kCategorical) {
    return {{"kind", "categorical"}, {"vocabulary", spec.vocabulary}};
  }
  return {{"kind", "continuous"}, {"min", spec.min}, {"max", spec.max}};
}

FeatureSpec spec_from_json(const nlohmann::json& doc) {
  const auto kind = doc.at("kind").get<std::string>();
  FeatureSpec spec;
  if (kind == "categorical") {
    spec = FeatureSpec::categorical(doc.at("vocabulary").get<std::vector<std::string>>());
  } else if (kind == "continuous") {
    spec = FeatureSpec::continuous(doc.at("min").get<double>(), doc.at("max").get<double>());
  } else {
    throw Error(ErrorKind::kParse, "model: unknown feature kind '" + kind + "'");
  }
  spec.validate();
  return spec;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path);
  out << text;
  out.close();
  if (!out) throw Error(ErrorKind::kIo, "write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot create directory " + dir + ": " + ec.message());
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

}  // namespace

nlohmann::json model_to_json(const ModelFile& file) {
  nlohmann::json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["config"] = run_config_to_json(file.config);
  doc["schema"] = {{"feature_names", file.schema.feature_names},
                   {"categorical_indices", file.schema.categorical_indices}};
  auto& specs = doc["feature_specs"] = nlohmann::json::array();
  for (const FeatureSpec& spec : file.feature_specs) specs.push_back(spec_to_json(spec));
  doc["s_norm"] = std::vector<double>(file.model.s_norm.values().begin(),
                                      file.model.s_norm.values().end());
  doc["s_shuf"] = std::vector<double>(file.model.s_shuf.values().begin(),
                                      file.model.s_shuf.values().end());
  doc["updates_per_epoch"] = file.model.updates_per_epoch;
  return doc;
}

ModelFile model_from_json(const nlohmann::json& doc) {
  try {
    const int version = doc.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw Error(ErrorKind::kSchema, "model: unsupported format_version " +
                                          std::to_string(version));
    }
    RunConfig config = run_config_from_json(doc.at("config"));
    RecordSchema schema;
    schema.feature_names = doc.at("schema").at("feature_names").get<std::vector<std::string>>();
    schema.categorical_indices =
        doc.at("schema").at("categorical_indices").get<std::vector<std::size_t>>();
    std::vector<FeatureSpec> specs;
    for (const auto& item : doc.at("feature_specs")) specs.push_back(spec_from_json(item));
    if (specs.size() != schema.n_features()) {
      throw Error(ErrorKind::kSchema, "model: feature_specs and schema disagree on arity");
    }
    config.validate(specs.size());
    SimilarityModel model{RealHypervector(doc.at("s_norm").get<std::vector<double>>()),
                          RealHypervector(doc.at("s_shuf").get<std::vector<double>>()),
                          config.train_config(),
                          doc.at("updates_per_epoch").get<std::vector<std::size_t>>()};
    if (model.s_norm.dim() != config.dim || model.s_shuf.dim() != config.dim) {
      throw Error(ErrorKind::kSchema, "model: similarity vectors do not match dim");
    }
    ModelFile file{std::move(config), std::move(schema), std::move(specs), std::move(model)};
    return file;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("model: ") + e.what());
  }
}

std::string serialize_model(const ModelFile& file) { return model_to_json(file).dump(1) + "\n"; }

void save_model(const ModelFile& file, const std::string& path) {
  write_file(path, serialize_model(file));
}

ModelFile load_model(const std::string& path) {
  const std::string text = read_file(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, path + ": " + e.what());
  }
  return model_from_json(doc);
}

TrainedPipeline train_pipeline(const RunConfig& config, const RawTable& train,
                               const RecordSchema& schema) {
  config.validate(schema.n_features());
  std::vector<FeatureSpec> specs = fit_feature_specs(train, schema);

  const LabeledDataset all = normalize_table(train, specs);
  LabeledDataset normal = extract_normal_subset(all);
  if (config.normal_sample) normal = take_first(normal, *config.normal_sample);
  SeededRng shuffle_rng = SeededRng(*config.seed).derive(kStreamShuffle);
  const LabeledDataset shuffled = column_shuffle(normal, shuffle_rng);

  const Encoder encoder(config.encoder_config(specs.size()));
  const auto normal_enc = encode_dataset(encoder, normal.rows, config.threads);
  const auto shuf_enc = encode_dataset(encoder, shuffled.rows, config.threads);
  SimilarityModel model = hdx::train(normal_enc, shuf_enc, config.train_config());

  TrainSummary summary;
  summary.train_rows = all.size();
  summary.normal_rows = normal.size();
  summary.shuffled_rows = shuffled.size();
  summary.updates_per_epoch = model.updates_per_epoch;
  return TrainedPipeline{ModelFile{config, schema, std::move(specs), std::move(model)},
                         std::move(summary)};
}

SplitEvaluation evaluate_split(const ModelFile& model, const RawTable& data,
                               const std::string& split, const std::vector<double>& grid,
                               unsigned threads) {
  if (data.n_features() != model.feature_specs.size()) {
    throw Error(ErrorKind::kSchema, "data has " + std::to_string(data.n_features()) +
                                        " features but the model expects " +
                                        std::to_string(model.feature_specs.size()));
  }
  if (data.rows() == 0) {
    throw Error(ErrorKind::kInvalidArgument, "evaluation split '" + split + "' has no records");
  }
  NormalizeStats stats;
  const LabeledDataset ds = normalize_table(data, model.feature_specs, &stats);
  const Encoder encoder = model.make_encoder();
  const auto encoded = encode_dataset(encoder, ds.rows, threads);

  SplitEvaluation out;
  out.split = split;
  out.records = ds.size();
  out.unseen_categories = stats.unseen_categories;
  out.labels = ds.labels;
  out.scores.reserve(encoded.size());
  std::vector<Label> configured(encoded.size());
  std::vector<Label> comparative(encoded.size());
  std::vector<double> sim_norm(encoded.size());
  TrainConfig comparative_cfg = model.model.config;
  comparative_cfg.mode = DecisionMode::kComparative;
  for (std::size_t i = 0; i < encoded.size(); ++i) {
    const Scores s = score(model.model, encoded[i]);
    out.scores.push_back(s);
    sim_norm[i] = s.sim_norm;
    configured[i] = decide(model.model.config, s);
    comparative[i] = decide(comparative_cfg, s);
  }
  out.metrics = compute_metrics(configured, ds.labels);
  out.comparative = compute_metrics(comparative, ds.labels);
  const std::vector<double> thresholds = grid.empty() ? default_grid(sim_norm) : grid;
  out.sweep = threshold_sweep(sim_norm, ds.labels, thresholds);
  return out;
}

std::vector<double> parse_grid(const std::string& spec) {
  const auto number = [&](std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
      throw Error(ErrorKind::kConfig, "grid: bad number '" + std::string(s) + "' in '" + spec + "'");
    }
    return v;
  };
  if (spec.empty() || spec == "auto") return {};
  std::vector<double> grid;
  const std::string_view text(spec);
  if (text.find(':') != std::string_view::npos) {
    const auto a = text.find(':');
    const auto b = text.find(':', a + 1);
    if (b == std::string_view::npos) {
      throw Error(ErrorKind::kConfig, "grid: expected lo:hi:count, got '" + spec + "'");
    }
    const double lo = number(text.substr(0, a));
    const double hi = number(text.substr(a + 1, b - a - 1));
    const double count = number(text.substr(b + 1));
    if (count < 1 || count != std::floor(count) || lo > hi) {
      throw Error(ErrorKind::kConfig, "grid: need lo <= hi and a positive integer count");
    }
    const auto n = static_cast<std::size_t>(count);
    for (std::size_t i = 0; i < n; ++i) {
      grid.push_back(n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) /
                                            static_cast<double>(n - 1));
    }
    return grid;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    grid.push_back(number(text.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return grid;
}

namespace {

std::vector<MeasuredAccuracy> measured_for(const SplitEvaluation& eval) {
  const auto split = parse_split(eval.split);
  if (!split) return {};
  return {MeasuredAccuracy{*split, 100.0 * eval.metrics.accuracy}};
}

void write_metrics_text(std::ostream& out, const char* title, const Metrics& m) {
  char line[200];
  std::snprintf(line, sizeof(line),
                "%s: accuracy %.4f  precision %.4f  recall %.4f  f1 %.4f  "
                "(tp %zu fp %zu tn %zu fn %zu)\n",
                title, m.accuracy, m.precision, m.recall, m.f1, m.confusion.tp, m.confusion.fp,
                m.confusion.tn, m.confusion.fn);
  out << line;
}

}  // namespace

std::string render_report_text(const ModelFile& model, const SplitEvaluation& eval) {
  std::ostringstream out;
  const RunConfig& c = model.config;
  out << "config: dim=" << c.dim << " levels=" << c.levels << " alpha=" << format_double(c.alpha)
      << " epochs=" << c.epochs << " seed=" << c.seed.value_or(0) << " mode=" << mode_name(c.mode)
      << " threshold=" << (c.threshold ? format_double(*c.threshold) : "none")
      << " normal_sample=" << (c.normal_sample ? std::to_string(*c.normal_sample) : "all")
      << " symmetric_updates=" << (c.symmetric_updates ? "true" : "false") << '\n';
  out << "split: " << eval.split << "  records: " << eval.records
      << "  unseen categories: " << eval.unseen_categories << '\n';
  write_metrics_text(out, "decision", eval.metrics);
  if (c.mode != DecisionMode::kComparative) write_metrics_text(out, "comparative", eval.comparative);
  const SweepPoint& best = eval.sweep.best();
  out << "sweep: " << eval.sweep.points.size() << " thresholds, best "
      << format_double(best.threshold) << " with accuracy " << format_double(best.metrics.accuracy)
      << '\n';
  out << '\n' << render_comparison_text(baseline_report(measured_for(eval)));
  return out.str();
}

nlohmann::json report_to_json(const ModelFile& model, const SplitEvaluation& eval) {
  nlohmann::json doc;
  doc["config"] = run_config_to_json(model.config);
  doc["split"] = eval.split;
  doc["records"] = eval.records;
  doc["unseen_categories"] = eval.unseen_categories;
  doc["metrics"] = metrics_to_json(eval.metrics);
  doc["comparative_metrics"] = metrics_to_json(eval.comparative);
  const SweepPoint& best = eval.sweep.best();
  doc["sweep_best"] = {{"threshold", best.threshold},
                       {"metrics", metrics_to_json(best.metrics)},
                       {"points", eval.sweep.points.size()}};
  doc["comparison"] = comparison_to_json(baseline_report(measured_for(eval)));
  return doc;
}

TrainSummary cmd_train(const RunConfig& config, std::ostream& log) {
  if (config.train_path.empty()) throw Error(ErrorKind::kConfig, "train: --train is required");
  if (config.out_dir.empty()) throw Error(ErrorKind::kConfig, "train: --out is required");
  const RecordSchema schema = RecordSchema::nslkdd();
  config.validate(schema.n_features());
  const RawTable raw = load_nslkdd(config.train_path, schema);
  const TrainedPipeline trained = train_pipeline(config, raw, schema);

  ensure_dir(config.out_dir);
  const std::string path = join_path(config.out_dir, kModelFileName);
  save_model(trained.file, path);

  const TrainSummary& s = trained.summary;
  log << "train rows: " << s.train_rows << "  normal: " << s.normal_rows
      << "  shuffled: " << s.shuffled_rows << '\n';
  for (std::size_t e = 0; e < s.updates_per_epoch.size(); ++e) {
    log << "epoch " << e + 1 << ": " << s.updates_per_epoch[e] << " updates\n";
  }
  log << "model written to " << path << '\n';
  return s;
}

SplitEvaluation cmd_eval(const std::string& model_path, const std::string& data_path,
                         const std::string& split, const std::string& out_dir, std::ostream& log,
                         unsigned threads) {
  if (out_dir.empty()) throw Error(ErrorKind::kConfig, "eval: --out is required");
  const ModelFile model = load_model(model_path);
  const RawTable raw = load_nslkdd(data_path, model.schema);
  SplitEvaluation eval = evaluate_split(model, raw, split, {}, threads);

  ensure_dir(out_dir);
  write_file(join_path(out_dir, split + ".report.txt"), render_report_text(model, eval));
  write_file(join_path(out_dir, split + ".report.json"), report_to_json(model, eval).dump(2) + "\n");
  write_file(join_path(out_dir, split + ".sweep.csv"), render_sweep_csv(eval.sweep));

  log << split << ": accuracy " << format_double(eval.metrics.accuracy) << " over "
      << eval.records << " records (" << mode_name(model.config.mode) << ")\n";
  return eval;
}

SweepResult cmd_sweep(const std::string& model_path, const std::string& data_path,
                      const std::string& split, const std::string& grid_spec,
                      const std::string& out_dir, std::ostream& log, unsigned threads) {
  if (out_dir.empty()) throw Error(ErrorKind::kConfig, "sweep: --out is required");
  const std::vector<double> grid = parse_grid(grid_spec);
  const ModelFile model = load_model(model_path);
  const RawTable raw = load_nslkdd(data_path, model.schema);
  const SplitEvaluation eval = evaluate_split(model, raw, split, grid, threads);

  ensure_dir(out_dir);
  write_file(join_path(out_dir, split + ".sweep.csv"), render_sweep_csv(eval.sweep));
  const SweepPoint& best = eval.sweep.best();
  log << "best threshold: " << format_double(best.threshold) << " (accuracy "
      << format_double(best.metrics.accuracy) << ")\n";
  return eval.sweep;
}

}  // namespace hdx
