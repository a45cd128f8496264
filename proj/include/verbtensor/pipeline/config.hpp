#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "verbtensor/learn/tensor_learner.hpp"

namespace verbtensor::pipeline {

struct PathsConfig {
  std::filesystem::path corpus;
  std::filesystem::path stopwords;
  std::filesystem::path triples;
  std::optional<std::filesystem::path> dev_pairs;
  std::filesystem::path output_dir;
};

struct VectorConfig {
  long long context_vocab_size = 10000;
  std::size_t top_n = 200;
  /// When non-empty and dev pairs are configured, top_n is chosen per K by
  /// Spearman rho on the dev pairs.
  std::vector<std::size_t> top_n_candidates;
  std::vector<std::size_t> dims{20, 40};
  bool sigma_weighting = true;
  bool row_normalize = true;
};

struct ExperimentConfig {
  std::size_t cap = 2000;
  std::size_t bucket_size = 10;
  std::uint64_t data_seed = 7;
  std::uint64_t cv_seed = 11;
  std::size_t small_size = 52;
  std::vector<std::size_t> curve_sizes{10, 50, 100, 250, 500, 1000};
  std::size_t curve_repeats = 5;
  /// Empty means every configured verb.
  std::vector<std::string> curve_verbs;
  double alpha = 0.05;
};

struct VerbEntry {
  std::string name;
  double concreteness = 0.0;
};

struct PipelineConfig {
  PathsConfig paths;
  VectorConfig vectors;
  learn::TrainConfig training;
  ExperimentConfig experiment;
  std::vector<VerbEntry> verbs;

  const VerbEntry* find_verb(std::string_view name) const;
  /// Throws ConfigError when a referenced input is missing or a value is out
  /// of range.
  void validate() const;
};

/// Parses `key = value` lines grouped under [section] headers. `#` and `;`
/// start comments. Relative paths resolve against `base_dir`. Unknown
/// sections or keys are rejected.
PipelineConfig parse_config(std::istream& in, const std::filesystem::path& base_dir);

/// parse_config on a file, resolving paths against its directory.
PipelineConfig load_config(const std::filesystem::path& path);

/// Replaces the data, cross-validation and training seeds.
void override_seed(PipelineConfig& config, std::uint64_t seed);

}  // namespace verbtensor::pipeline
