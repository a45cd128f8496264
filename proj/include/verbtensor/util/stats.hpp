#pragma once

#include <span>
#include <vector>

namespace verbtensor::util {

double mean(std::span<const double> xs);
/// Sample (n - 1) standard deviation; 0 for fewer than two values.
double sample_sd(std::span<const double> xs);

/// 1-based ranks with ties assigned their average rank.
std::vector<double> average_ranks(std::span<const double> xs);

/// Pearson correlation. Throws InvalidArgument if either side is constant
/// or the lengths differ.
double pearson(std::span<const double> a, std::span<const double> b);

/// Spearman rank correlation (Pearson on average ranks).
double spearman(std::span<const double> a, std::span<const double> b);

}  // namespace verbtensor::util
