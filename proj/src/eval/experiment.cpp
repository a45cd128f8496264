#include "verbtensor/eval/experiment.hpp"

#include <string>

#include "verbtensor/error.hpp"
#include "verbtensor/eval/metrics.hpp"
#include "verbtensor/util/parallel.hpp"
#include "verbtensor/util/rng.hpp"
#include "verbtensor/util/stats.hpp"

namespace verbtensor::eval {

using data::Label;

std::string_view to_string(Method method) { return method == Method::tensor ? "tensor" : "baseline"; }

Method parse_method(std::string_view text) {
  if (text == "tensor") return Method::tensor;
  if (text == "baseline") return Method::baseline;
  throw InvalidArgument("unknown method '" + std::string(text) + "'");
}

MetricSummary summarize(std::span<const double> values) { return {util::mean(values), util::sample_sd(values)}; }

std::vector<double> auc_values(const std::vector<FoldResult>& folds) {
  std::vector<double> out;
  for (const auto& f : folds) out.push_back(f.auc);
  return out;
}

std::vector<double> f1_values(const std::vector<FoldResult>& folds) {
  std::vector<double> out;
  for (const auto& f : folds) out.push_back(f.f1);
  return out;
}

namespace {

const core::DenseVector& lookup(const vectors::EmbeddingTable& embeddings, const std::string& noun) {
  const auto* v = embeddings.find(noun);
  if (!v) throw DataError("no embedding for noun '" + noun + "'");
  return *v;
}

}  // namespace

std::vector<learn::Example> to_examples(const data::VerbDataset& dataset, const vectors::EmbeddingTable& embeddings) {
  std::vector<learn::Example> out;
  out.reserve(dataset.triples.size());
  for (const auto& t : dataset.triples) {
    out.push_back({lookup(embeddings, t.subject), lookup(embeddings, t.object), t.label});
  }
  return out;
}

std::vector<baseline::NounPair> to_pairs(const data::VerbDataset& dataset, Label label,
                                         const vectors::EmbeddingTable& embeddings) {
  std::vector<baseline::NounPair> out;
  for (const auto& t : dataset.triples) {
    if (t.label == label) out.push_back({lookup(embeddings, t.subject), lookup(embeddings, t.object)});
  }
  return out;
}

ScoredSet train_and_score(Method method, const data::VerbDataset& train, const data::VerbDataset& test,
                          const vectors::EmbeddingTable& embeddings, const learn::TrainConfig& config) {
  ScoredSet out;
  for (const auto& t : test.triples) out.gold.push_back(t.label);
  if (method == Method::tensor) {
    const auto examples = to_examples(train, embeddings);
    const auto model = learn::train(examples, config).model;
    for (const auto& t : test.triples) {
      const auto p = learn::predict(model, lookup(embeddings, t.subject), lookup(embeddings, t.object));
      out.scores.push_back(p.p_plausible);
      out.predictions.push_back(p.label);
    }
  } else {
    const auto positives = to_pairs(train, Label::plausible, embeddings);
    const auto negatives = to_pairs(train, Label::implausible, embeddings);
    auto model = baseline::train_baseline(train.verb, positives);
    baseline::calibrate(model, positives, negatives);
    for (const auto& t : test.triples) {
      const auto p = baseline::predict_baseline(model, lookup(embeddings, t.subject), lookup(embeddings, t.object));
      out.scores.push_back(p.score);
      out.predictions.push_back(p.label);
    }
  }
  return out;
}

std::uint64_t fold_train_seed(const learn::TrainConfig& config, std::size_t index) {
  return util::derive_seed(config.seed, "fold", index);
}

std::vector<FoldResult> run_5x2cv(Method method, const data::VerbDataset& dataset,
                                  const vectors::EmbeddingTable& embeddings, const learn::TrainConfig& config,
                                  std::uint64_t seed, unsigned jobs) {
  const auto splits = data::make_5x2cv_splits(dataset, seed);
  std::vector<FoldResult> results(splits.size());
  util::parallel_for(splits.size(), jobs, [&](std::size_t i) {
    const auto& split = splits[i];
    try {
      learn::TrainConfig fold_config = config;
      fold_config.seed = fold_train_seed(config, i);
      const auto scored = train_and_score(method, data::select(dataset, split.train), data::select(dataset, split.test),
                                          embeddings, fold_config);
      results[i] = FoldResult{split.repetition, split.fold, roc_auc(scored.scores, scored.gold),
                              f1_plausible(scored.predictions, scored.gold), split.test.size()};
    } catch (const DivergenceError& e) {
      throw DivergenceError("repetition " + std::to_string(split.repetition) + " fold " + std::to_string(split.fold) +
                                ": " + e.what(),
                            e.epoch());
    } catch (const Error& e) {
      throw DataError("repetition " + std::to_string(split.repetition) + " fold " + std::to_string(split.fold) + ": " +
                      e.what());
    }
  });
  return results;
}

std::vector<CurvePoint> learning_curve(Method method, const data::VerbDataset& dataset,
                                       const std::vector<std::size_t>& train_sizes,
                                       const vectors::EmbeddingTable& embeddings, const learn::TrainConfig& config,
                                       std::uint64_t seed, std::size_t repeats, unsigned jobs) {
  if (repeats == 0) throw InvalidArgument("learning_curve: repeats must be positive");
  const auto split = data::make_5x2cv_splits(dataset, seed).front();
  const auto train_half = data::select(dataset, split.train);
  const auto test_half = data::select(dataset, split.test);
  for (auto size : train_sizes) {
    if (size == 0 || size > train_half.triples.size()) {
      throw InvalidArgument("learning_curve: size " + std::to_string(size) + " outside [1, " +
                            std::to_string(train_half.triples.size()) + "]");
    }
  }
  const std::size_t n_jobs = train_sizes.size() * repeats;
  std::vector<double> aucs(n_jobs);
  util::parallel_for(n_jobs, jobs, [&](std::size_t job) {
    const std::size_t point = job / repeats;
    const std::size_t rep = job % repeats;
    const auto sample =
        data::subsample(train_half, train_sizes[point], util::derive_seed(seed, "curve", point * 1000003 + rep));
    const auto scored = train_and_score(method, sample, test_half, embeddings, config);
    aucs[job] = roc_auc(scored.scores, scored.gold);
  });
  std::vector<CurvePoint> out;
  for (std::size_t p = 0; p < train_sizes.size(); ++p) {
    const std::span<const double> values(aucs.data() + p * repeats, repeats);
    const auto s = summarize(values);
    out.push_back({train_sizes[p], s.mean, s.sd});
  }
  return out;
}

}  // namespace verbtensor::eval
