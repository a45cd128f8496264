#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "verbtensor/baseline/kron_baseline.hpp"
#include "verbtensor/data/dataset.hpp"
#include "verbtensor/learn/tensor_learner.hpp"
#include "verbtensor/vectors/noun_vectors.hpp"

namespace verbtensor::eval {

enum class Method { baseline, tensor };

std::string_view to_string(Method method);
Method parse_method(std::string_view text);

struct FoldResult {
  int repetition = 0;
  int fold = 0;
  double auc = 0.0;
  double f1 = 0.0;
  std::size_t n_test = 0;
};

struct MetricSummary {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation
};

MetricSummary summarize(std::span<const double> values);
std::vector<double> auc_values(const std::vector<FoldResult>& folds);
std::vector<double> f1_values(const std::vector<FoldResult>& folds);

/// Looks up embeddings for every triple. Throws DataError on a missing noun.
std::vector<learn::Example> to_examples(const data::VerbDataset& dataset, const vectors::EmbeddingTable& embeddings);
std::vector<baseline::NounPair> to_pairs(const data::VerbDataset& dataset, data::Label label,
                                         const vectors::EmbeddingTable& embeddings);

/// Per-triple ranking scores and labels for a test set.
struct ScoredSet {
  std::vector<double> scores;  // p_plausible (tensor) or cosine (baseline)
  std::vector<data::Label> predictions;
  std::vector<data::Label> gold;
};

/// Trains `method` on `train` and scores `test`. The baseline sees only the
/// positives of `train` when building its matrix and all of `train` when
/// calibrating its cutoff.
ScoredSet train_and_score(Method method, const data::VerbDataset& train, const data::VerbDataset& test,
                          const vectors::EmbeddingTable& embeddings, const learn::TrainConfig& config);

/// Seed used to train fold `index` (0..9) of a 5x2cv run.
std::uint64_t fold_train_seed(const learn::TrainConfig& config, std::size_t index);

/// Ten results ordered (rep 1 fold 1, rep 1 fold 2, ..., rep 5 fold 2),
/// independent of `jobs`. Splits come from make_5x2cv_splits(dataset, seed).
/// Training errors are rethrown with the fold id prepended.
std::vector<FoldResult> run_5x2cv(Method method, const data::VerbDataset& dataset,
                                  const vectors::EmbeddingTable& embeddings, const learn::TrainConfig& config,
                                  std::uint64_t seed, unsigned jobs = 1);

struct CurvePoint {
  std::size_t size = 0;
  double mean_auc = 0.0;
  double sd = 0.0;
};

/// Holds out half of the dataset (the test half of the first 5x2cv split
/// for `seed`), then for each size draws `repeats` stratified subsamples of
/// the other half, trains, and records held-out AUC. Training always uses
/// `config` unchanged, so a size equal to the whole half reproduces a
/// direct train_and_score run.
std::vector<CurvePoint> learning_curve(Method method, const data::VerbDataset& dataset,
                                       const std::vector<std::size_t>& train_sizes,
                                       const vectors::EmbeddingTable& embeddings, const learn::TrainConfig& config,
                                       std::uint64_t seed, std::size_t repeats = 5, unsigned jobs = 1);

}  // namespace verbtensor::eval
