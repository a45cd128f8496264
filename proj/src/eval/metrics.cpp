#include "verbtensor/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

#include "verbtensor/error.hpp"

namespace verbtensor::eval {

namespace {

using data::Label;

void check_inputs(std::span<const double> scores, std::span<const Label> labels, const char* who) {
  if (scores.size() != labels.size()) throw DimensionError(std::string(who) + ": scores/labels length mismatch");
  const auto pos = std::count(labels.begin(), labels.end(), Label::plausible);
  if (pos == 0 || pos == static_cast<std::ptrdiff_t>(labels.size())) {
    throw InvalidArgument(std::string(who) + ": need at least one positive and one negative");
  }
  for (double s : scores) {
    if (std::isnan(s)) throw InvalidArgument(std::string(who) + ": NaN score");
  }
}

std::vector<std::size_t> descending_order(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

}  // namespace

double roc_auc(std::span<const double> scores, std::span<const Label> labels) {
  check_inputs(scores, labels, "roc_auc");
  // Walk ascending score groups; each positive earns 2 per lower negative
  // and 1 per tied negative. Integer arithmetic keeps the count exact.
  auto order = descending_order(scores);
  std::reverse(order.begin(), order.end());
  std::uint64_t twice_wins = 0;
  std::uint64_t negatives_below = 0;
  std::uint64_t n_pos = 0;
  std::uint64_t n_neg = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    std::uint64_t gp = 0;
    std::uint64_t gn = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] == Label::plausible ? gp : gn)++;
      ++j;
    }
    twice_wins += gp * (2 * negatives_below + gn);
    negatives_below += gn;
    n_pos += gp;
    n_neg += gn;
    i = j;
  }
  return static_cast<double>(twice_wins) / (2.0 * static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double roc_auc_trapezoid(std::span<const double> scores, std::span<const Label> labels) {
  check_inputs(scores, labels, "roc_auc_trapezoid");
  const auto n_pos = static_cast<double>(std::count(labels.begin(), labels.end(), Label::plausible));
  const auto n_neg = static_cast<double>(labels.size()) - n_pos;
  const auto order = descending_order(scores);
  double tp = 0.0, fp = 0.0;
  double prev_tpr = 0.0, prev_fpr = 0.0;
  double area = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    // Lower the threshold past one group of tied scores.
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] == Label::plausible ? tp : fp) += 1.0;
      ++j;
    }
    const double tpr = tp / n_pos;
    const double fpr = fp / n_neg;
    area += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0;
    prev_tpr = tpr;
    prev_fpr = fpr;
    i = j;
  }
  return area;
}

double f1_plausible(std::span<const Label> predictions, std::span<const Label> gold) {
  if (predictions.size() != gold.size()) throw DimensionError("f1_plausible: length mismatch");
  if (predictions.empty()) throw InvalidArgument("f1_plausible: empty input");
  double tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool pred = predictions[i] == Label::plausible;
    const bool truth = gold[i] == Label::plausible;
    if (pred && truth) ++tp;
    if (pred && !truth) ++fp;
    if (!pred && truth) ++fn;
  }
  const double precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
  const double recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

ComparisonVerdict f_test_5x2cv(std::span<const double> metric_a, std::span<const double> metric_b, double alpha) {
  if (metric_a.size() != 10 || metric_b.size() != 10) {
    throw InvalidArgument("f_test_5x2cv: expected 10 values per method (5 repetitions x 2 folds)");
  }
  if (alpha != 0.05) throw InvalidArgument("f_test_5x2cv: only alpha = 0.05 is supported");
  double numerator = 0.0;
  double denominator = 0.0;
  for (std::size_t rep = 0; rep < 5; ++rep) {
    const double d1 = metric_a[2 * rep] - metric_b[2 * rep];
    const double d2 = metric_a[2 * rep + 1] - metric_b[2 * rep + 1];
    const double mean = (d1 + d2) / 2.0;
    numerator += d1 * d1 + d2 * d2;
    denominator += (d1 - mean) * (d1 - mean) + (d2 - mean) * (d2 - mean);
  }
  denominator *= 2.0;
  ComparisonVerdict v;
  v.alpha = alpha;
  if (denominator == 0.0) {
    v.f_statistic = numerator == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  } else {
    v.f_statistic = numerator / denominator;
  }
  v.significant = v.f_statistic > v.critical_value;
  return v;
}

}  // namespace verbtensor::eval
