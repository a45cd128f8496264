#include <gtest/gtest.h>

#include <algorithm>

#include "planted.hpp"
#include "verbtensor/error.hpp"
#include "verbtensor/eval/experiment.hpp"
#include "verbtensor/eval/metrics.hpp"

using namespace verbtensor;
using namespace verbtensor::eval;

namespace {

learn::TrainConfig quick_config() {
  learn::TrainConfig c;
  c.epochs = 30;
  c.learning_rate = 0.1;
  return c;
}

}  // namespace

TEST(Method, NamesRoundTrip) {
  EXPECT_EQ(parse_method(to_string(Method::baseline)), Method::baseline);
  EXPECT_EQ(parse_method(to_string(Method::tensor)), Method::tensor);
  EXPECT_THROW(parse_method("svm"), InvalidArgument);
}

TEST(Summarize, MeanAndSampleSd) {
  const std::vector<double> v{1, 2, 3, 4};
  const auto s = summarize(v);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_DOUBLE_EQ(s.sd, std::sqrt(5.0 / 3.0));
}

TEST(Examples, MissingNounIsDataError) {
  auto data = planted::make(10, 3, 1);
  data.dataset.triples.push_back({"ghost", "devour", planted::noun(1, 0), data::Label::plausible});
  EXPECT_THROW(to_examples(data.dataset, data.embeddings), DataError);
}

TEST(Examples, PairsFilterByLabel) {
  const auto data = planted::make(12, 3, 1);
  EXPECT_EQ(to_pairs(data.dataset, data::Label::plausible, data.embeddings).size(), 12u);
  EXPECT_EQ(to_pairs(data.dataset, data::Label::implausible, data.embeddings).size(), 12u);
}

TEST(FiveByTwo, TenFoldsInCanonicalOrder) {
  const auto data = planted::make(40, 4, 2);
  const auto folds = run_5x2cv(Method::baseline, data.dataset, data.embeddings, {}, 3);
  ASSERT_EQ(folds.size(), 10u);
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_EQ(folds[i].repetition, static_cast<int>(i / 2) + 1);
    EXPECT_EQ(folds[i].fold, static_cast<int>(i % 2) + 1);
    EXPECT_EQ(folds[i].n_test, 40u);
  }
}

TEST(FiveByTwo, DeterministicAndIndependentOfJobs) {
  const auto data = planted::make(40, 4, 3);
  const auto cfg = quick_config();
  const auto serial = run_5x2cv(Method::tensor, data.dataset, data.embeddings, cfg, 9, 1);
  const auto again = run_5x2cv(Method::tensor, data.dataset, data.embeddings, cfg, 9, 1);
  const auto parallel = run_5x2cv(Method::tensor, data.dataset, data.embeddings, cfg, 9, 4);
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_EQ(serial[i].auc, again[i].auc);
    EXPECT_EQ(serial[i].auc, parallel[i].auc);
    EXPECT_EQ(serial[i].f1, parallel[i].f1);
  }
}

TEST(FiveByTwo, FoldSeedsDifferPerFold) {
  const learn::TrainConfig cfg;
  EXPECT_NE(fold_train_seed(cfg, 0), fold_train_seed(cfg, 1));
  EXPECT_EQ(fold_train_seed(cfg, 4), fold_train_seed(cfg, 4));
}

TEST(FiveByTwo, BothMethodsRankPlantedDataWell) {
  const auto data = planted::make(80, 5, 4, 0.2);
  for (auto method : {Method::baseline, Method::tensor}) {
    const auto folds = run_5x2cv(method, data.dataset, data.embeddings, quick_config(), 5);
    EXPECT_GE(summarize(auc_values(folds)).mean, 0.9) << to_string(method);
    EXPECT_GE(summarize(f1_values(folds)).mean, 0.8) << to_string(method);
  }
}

TEST(FiveByTwo, PairedFTestOnIdenticalMethodIsNotSignificant) {
  const auto data = planted::make(30, 4, 5);
  const auto a = run_5x2cv(Method::baseline, data.dataset, data.embeddings, {}, 6);
  const auto b = run_5x2cv(Method::baseline, data.dataset, data.embeddings, {}, 6);
  EXPECT_FALSE(f_test_5x2cv(auc_values(a), auc_values(b)).significant);
}

TEST(FiveByTwo, TrainingFailureNamesTheFold) {
  const auto data = planted::make(20, 3, 6);
  auto cfg = quick_config();
  cfg.learning_rate = 1e300;
  try {
    run_5x2cv(Method::tensor, data.dataset, data.embeddings, cfg, 1);
    FAIL() << "expected divergence";
  } catch (const DivergenceError& e) {
    EXPECT_NE(std::string(e.what()).find("repetition 1 fold 1"), std::string::npos);
  }
}

TEST(Curve, OnePointPerSize) {
  const auto data = planted::make(40, 4, 7);
  const auto curve = learning_curve(Method::baseline, data.dataset, {4, 10, 20, 40}, data.embeddings, {}, 3, 3);
  ASSERT_EQ(curve.size(), 4u);
  EXPECT_EQ(curve[0].size, 4u);
  EXPECT_EQ(curve[3].size, 40u);
}

TEST(Curve, FullHalfMatchesDirectRun) {
  const auto data = planted::make(40, 4, 8);
  const auto cfg = quick_config();
  const auto split = data::make_5x2cv_splits(data.dataset, 12).front();
  const auto direct = train_and_score(Method::tensor, data::select(data.dataset, split.train),
                                      data::select(data.dataset, split.test), data.embeddings, cfg);
  const auto curve = learning_curve(Method::tensor, data.dataset, {40}, data.embeddings, cfg, 12, 3);
  EXPECT_DOUBLE_EQ(curve[0].mean_auc, roc_auc(direct.scores, direct.gold));
  EXPECT_EQ(curve[0].sd, 0.0);
}

TEST(Curve, MoreDataDoesNotHurtOnAverage) {
  const auto data = planted::make(100, 5, 9, 0.3);
  const auto curve =
      learning_curve(Method::tensor, data.dataset, {6, 100}, data.embeddings, quick_config(), 13, 5, 2);
  EXPECT_GE(curve[1].mean_auc + 0.02, curve[0].mean_auc);
  EXPECT_GE(curve[1].mean_auc, 0.9);
}

TEST(Curve, RejectsOversizedAndEmptySizes) {
  const auto data = planted::make(20, 3, 10);
  EXPECT_THROW(learning_curve(Method::baseline, data.dataset, {21}, data.embeddings, {}, 1), InvalidArgument);
  EXPECT_THROW(learning_curve(Method::baseline, data.dataset, {0}, data.embeddings, {}, 1), InvalidArgument);
  EXPECT_THROW(learning_curve(Method::baseline, data.dataset, {4}, data.embeddings, {}, 1, 0), InvalidArgument);
}
