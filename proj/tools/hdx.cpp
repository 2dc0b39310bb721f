// hdx: train and evaluate the hyperdimensional NSL-KDD anomaly detector.
//
// Exit codes: 0 ok, 1 usage, 2 I/O, 3 parse, 4 config, 5 schema,
// 6 empty normal subset, 7 dimension, 8 invalid argument.

#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "hdx/error.hpp"
#include "hdx/eval.hpp"
#include "hdx/pipeline.hpp"

namespace {

std::string default_split(const std::string& data_path) {
  const std::string stem = std::filesystem::path(data_path).stem().string();
  if (const auto split = hdx::parse_split(stem)) return std::string(hdx::split_name(*split));
  return stem.empty() ? "eval" : stem;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hyperdimensional one-class anomaly detection for NSL-KDD"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file; command-line flags take precedence");

  hdx::RunConfig config;
  std::string mode = "comparative";
  std::uint64_t seed = 0;
  double threshold = 0.0;
  std::size_t normal_sample = 0;
  std::string model_path;
  std::string split;
  std::string grid = "auto";

  // Shared options live on the top-level app so config-file keys need no
  // section prefix; subcommands fall through to them.
  app.add_option("--dim", config.dim, "hypervector dimension")->capture_default_str();
  app.add_option("--levels", config.levels, "quantization levels")->capture_default_str();
  app.add_option("--alpha", config.alpha, "learning rate")->capture_default_str();
  app.add_option("--epochs", config.epochs, "refinement passes")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed")->envname("HDX_SEED");
  app.add_option("--mode", mode, "decision rule")
      ->check(CLI::IsMember({"comparative", "absolute"}))
      ->capture_default_str();
  auto* threshold_opt = app.add_option("--threshold", threshold, "absolute-mode threshold");
  auto* sample_opt =
      app.add_option("--normal-sample", normal_sample, "use only the first N normal records");
  app.add_flag("--symmetric-updates", config.symmetric_updates,
               "also refine on shuffled records");
  app.add_option("--train", config.train_path, "KDDTrain+ file");
  app.add_option("--test", config.test_path, "evaluation split file");
  app.add_option("--out", config.out_dir, "output directory");
  app.add_option("--threads", config.threads, "encoding threads (0 = all cores)");

  auto* train_cmd = app.add_subcommand("train", "fit a model and write <out>/model.json");
  train_cmd->fallthrough();

  auto* eval_cmd = app.add_subcommand("eval", "score a split and write reports");
  eval_cmd->fallthrough();
  eval_cmd->add_option("--model", model_path, "model file")->required();
  eval_cmd->add_option("--split", split, "split name (default: from the file name)");

  auto* sweep_cmd = app.add_subcommand("sweep", "absolute-threshold sweep over a split");
  sweep_cmd->fallthrough();
  sweep_cmd->add_option("--model", model_path, "model file")->required();
  sweep_cmd->add_option("--split", split, "split name (default: from the file name)");
  sweep_cmd->add_option("--grid", grid, "auto | lo:hi:count | t1,t2,...")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    config.mode = hdx::parse_mode(mode);
    if (seed_opt->count() > 0) config.seed = seed;
    if (threshold_opt->count() > 0) config.threshold = threshold;
    if (sample_opt->count() > 0) config.normal_sample = normal_sample;

    if (train_cmd->parsed()) {
      hdx::cmd_train(config, std::cout);
      return 0;
    }
    if (config.test_path.empty()) {
      throw hdx::Error(hdx::ErrorKind::kConfig, "--test is required");
    }
    const std::string split_name = split.empty() ? default_split(config.test_path) : split;
    if (eval_cmd->parsed()) {
      hdx::cmd_eval(model_path, config.test_path, split_name, config.out_dir, std::cout,
                    config.threads);
    } else {
      hdx::cmd_sweep(model_path, config.test_path, split_name, grid, config.out_dir, std::cout,
                     config.threads);
    }
    return 0;
  } catch (const hdx::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  }
}
