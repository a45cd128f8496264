// Command-line driver for the verb plausibility pipeline.
//
//   verbtensor --config run.ini build-vectors
//   verbtensor --config run.ini gen-data
//   verbtensor --config run.ini experiment --which full-cv
//   verbtensor --config run.ini train --verb devour
//   verbtensor --config run.ini predict --verb devour --subject wolf --object sheep
//   verbtensor --config run.ini eval-vectors --pairs wordsim.tsv
//
// Exit codes: 0 success, 1 invalid configuration or arguments, 2 runtime
// failure (including partial failure of some verbs).

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "verbtensor/error.hpp"
#include "verbtensor/pipeline/commands.hpp"
#include "verbtensor/pipeline/config.hpp"

namespace vp = verbtensor::pipeline;

int main(int argc, char** argv) {
  CLI::App app{"Learn verb tensors for subject-verb-object plausibility"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  std::string log_level = "info";
  app.add_option("--config", config_path, "Pipeline configuration file")->required();
  app.add_option("--out", out_dir, "Override the output directory");
  app.add_option("--seed", seed, "Override every seed in the configuration");
  app.add_option("--jobs", jobs, "Worker threads")->check(CLI::Range(1u, 256u));
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "critical", "off"}));

  auto* build = app.add_subcommand("build-vectors", "Count, weight and reduce noun vectors");
  auto* gen = app.add_subcommand("gen-data", "Build balanced per-verb datasets");
  auto* experiment = app.add_subcommand("experiment", "Run an evaluation protocol");
  std::string which;
  experiment->add_option("--which", which, "full-cv, small-cv or curves")
      ->required()
      ->check(CLI::IsMember({"full-cv", "small-cv", "curves"}));
  auto* train = app.add_subcommand("train", "Train both models for one verb on its whole dataset");
  std::string verb;
  train->add_option("--verb", verb)->required();
  auto* predict = app.add_subcommand("predict", "Score one triple with the trained models");
  std::string subject, object;
  predict->add_option("--verb", verb)->required();
  predict->add_option("--subject", subject)->required();
  predict->add_option("--object", object)->required();
  auto* eval_vectors = app.add_subcommand("eval-vectors", "Spearman correlation against word-similarity pairs");
  std::string pairs;
  eval_vectors->add_option("--pairs", pairs)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  auto logger = spdlog::stderr_color_mt("verbtensor");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::from_str(log_level));

  try {
    auto config = vp::load_config(config_path);
    if (out_dir) config.paths.output_dir = *out_dir;
    if (seed) vp::override_seed(config, *seed);
    config.validate();

    if (*build) return vp::cmd_build_vectors(config, jobs);
    if (*gen) return vp::cmd_gen_data(config, jobs);
    if (*experiment) return vp::cmd_experiment(config, vp::parse_experiment_kind(which), jobs);
    if (*train) return vp::cmd_train(config, verb);
    if (*predict) return vp::cmd_predict(config, verb, subject, object, std::cout);
    if (*eval_vectors) return vp::cmd_eval_vectors(config, pairs, std::cout);
  } catch (const verbtensor::ConfigError& e) {
    spdlog::error("{}", e.what());
    return 1;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 2;
  }
  return 1;
}
