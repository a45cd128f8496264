#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "verbtensor/core/tensor.hpp"
#include "verbtensor/data/dataset.hpp"

namespace verbtensor::baseline {

/// A (subject, object) embedding pair.
struct NounPair {
  core::DenseVector subject;
  core::DenseVector object;
};

/// Average Kronecker product of the positive subject/object pairs of one
/// verb, plus the label cutoff once calibrated.
struct KronBaselineModel {
  std::string verb;
  core::DenseMatrix avg_matrix;
  std::optional<double> cutoff;
};

/// Averages kronecker(subject, object) over the positives. The interface
/// only admits positive pairs.
KronBaselineModel train_baseline(std::string verb, std::span<const NounPair> positives);

/// Cosine between kronecker(subject, object) and the verb matrix, both
/// flattened. Throws InvalidArgument on zero vectors.
double score(const KronBaselineModel& model, const core::DenseVector& subject, const core::DenseVector& object);

/// Equal-error threshold: minimizes |FPR(t) - FNR(t)| over the midpoints
/// between adjacent distinct scores plus +/- infinity, preferring the
/// higher threshold on ties. A score >= t is labelled plausible.
double calibrate_cutoff(std::span<const double> positive_scores, std::span<const double> negative_scores);

/// Scores the given training pairs and stores the calibrated cutoff.
void calibrate(KronBaselineModel& model, std::span<const NounPair> positives, std::span<const NounPair> negatives);

struct BaselinePrediction {
  data::Label label;
  double score;
};

/// Plausible iff score >= cutoff. Throws InvalidArgument if uncalibrated.
BaselinePrediction predict_baseline(const KronBaselineModel& model, const core::DenseVector& subject,
                                    const core::DenseVector& object);

/// Binary K x K matrix block.
void save_baseline(const std::filesystem::path& matrix_path, const std::filesystem::path& sidecar_path,
                   const KronBaselineModel& model, std::size_t n_positives);
KronBaselineModel load_baseline(const std::filesystem::path& matrix_path, const std::filesystem::path& sidecar_path);

}  // namespace verbtensor::baseline
