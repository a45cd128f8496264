#pragma once

#include <span>
#include <vector>

#include "verbtensor/data/dataset.hpp"

namespace verbtensor::eval {

/// Area under the ROC curve as the Mann-Whitney statistic: the fraction of
/// (positive, negative) pairs where the positive scores higher, ties
/// counting one half. Throws InvalidArgument unless both classes occur.
double roc_auc(std::span<const double> scores, std::span<const data::Label> labels);

/// The same area by trapezoidal integration of the ROC over every distinct
/// threshold. Kept as an independent route to roc_auc.
double roc_auc_trapezoid(std::span<const double> scores, std::span<const data::Label> labels);

/// F1 of the plausible class; 0 when precision + recall is 0.
double f1_plausible(std::span<const data::Label> predictions, std::span<const data::Label> gold);

/// Critical value of F(10, 5) at alpha = 0.05.
inline constexpr double kF10_5Critical05 = 4.735;

struct ComparisonVerdict {
  double f_statistic = 0.0;  // +inf when the variance term vanishes
  bool significant = false;
  double alpha = 0.05;
  double critical_value = kF10_5Critical05;
};

/// Combined 5x2cv F-test. Inputs are ordered (rep1 fold1, rep1 fold2, ...,
/// rep5 fold2) and aligned on identical splits. With d = a - b,
/// F = sum d^2 / (2 * sum_i s_i^2), s_i^2 the within-repetition variance.
/// A zero denominator gives F = +inf (significant) unless every d is zero,
/// in which case F = 0 (not significant). Only alpha = 0.05 is supported.
ComparisonVerdict f_test_5x2cv(std::span<const double> metric_a, std::span<const double> metric_b, double alpha = 0.05);

}  // namespace verbtensor::eval
