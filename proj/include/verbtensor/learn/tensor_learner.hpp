#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "verbtensor/core/tensor.hpp"
#include "verbtensor/data/dataset.hpp"

namespace verbtensor::learn {

/// Sentence-space size of the plausibility space.
inline constexpr std::size_t kPlausibilityDims = 2;
/// Row of theta / component of p for each class.
inline constexpr std::size_t kPlausibleClass = 0;
inline constexpr std::size_t kImplausibleClass = 1;

enum class UpdateMode { stochastic, batch };

struct TrainConfig {
  double learning_rate = 0.05;
  double adagrad_epsilon = 1e-8;
  double lambda = 1e-4;
  int epochs = 100;
  double init_scale = 0.01;
  std::uint64_t seed = 1;
  /// Include the softmax parameters in the L2 penalty.
  bool regularize_theta = true;
  UpdateMode mode = UpdateMode::stochastic;

  /// Throws InvalidArgument on non-positive rates, scales or epochs.
  void validate() const;
};

/// Verb tensor (K_subj x K_obj x S) plus softmax parameters. Row y of
/// `theta` holds S weights on the sigmoid activations followed by a bias.
struct VerbTensorModel {
  core::Order3Tensor tensor;
  core::DenseMatrix theta;

  std::size_t dim_subject() const noexcept { return tensor.dim_subject(); }
  std::size_t dim_object() const noexcept { return tensor.dim_object(); }
  std::size_t dim_sentence() const noexcept { return tensor.dim_sentence(); }

  /// Uniform draws in [-init_scale, init_scale] from `seed`.
  static VerbTensorModel initialize(std::size_t dim_subject, std::size_t dim_object, std::size_t dim_sentence,
                                    double init_scale, std::uint64_t seed);
  static VerbTensorModel zeros(std::size_t dim_subject, std::size_t dim_object, std::size_t dim_sentence = kPlausibilityDims);

  bool operator==(const VerbTensorModel&) const = default;
};

struct ForwardTrace {
  core::DenseVector z;  // contraction output
  core::DenseVector a;  // sigmoid(z)
  core::DenseVector p;  // softmax over the two classes
};

struct Example {
  core::DenseVector subject;
  core::DenseVector object;
  data::Label label = data::Label::plausible;
};

ForwardTrace forward(const VerbTensorModel& model, const core::DenseVector& subject, const core::DenseVector& object);

/// Sum over examples of -log p_correct (the KL divergence from a one-hot
/// target) plus lambda/2 times the squared norm of the parameters.
/// Throws DivergenceError (epoch -1) if the value is not finite.
double objective(const VerbTensorModel& model, std::span<const Example> batch, double lambda,
                 bool regularize_theta = true);

/// Gradient of one example's loss plus lambda/2 * ||params||^2.
struct Gradients {
  core::Order3Tensor tensor;
  core::DenseMatrix theta;
};

Gradients gradients(const VerbTensorModel& model, const Example& example, double lambda,
                    bool regularize_theta = true);

struct TrainResult {
  VerbTensorModel model;
  /// objective_trace[0] is the objective at initialization, entry e the
  /// objective after epoch e.
  std::vector<double> objective_trace;
};

/// Adagrad on the regularized objective. In stochastic mode the examples are
/// visited in a fresh seeded permutation each epoch and every per-example
/// step carries lambda / N of the penalty, so one epoch of steps sums to the
/// full-objective gradient. Batch mode takes one step per epoch.
/// Throws DivergenceError naming the epoch if the objective stops being
/// finite.
TrainResult train(std::span<const Example> examples, const TrainConfig& config);

struct Prediction {
  data::Label label;
  double p_plausible;
};

/// Plausible iff p_plausible >= 0.5.
Prediction predict(const VerbTensorModel& model, const core::DenseVector& subject, const core::DenseVector& object);

/// Binary tensor block for the tensor followed by one for theta.
void save_model(const std::filesystem::path& path, const VerbTensorModel& model);
VerbTensorModel load_model(const std::filesystem::path& path);

/// Text sidecar: dims, config, and the objective trace as CSV.
void write_model_sidecar(const std::filesystem::path& path, const VerbTensorModel& model, const TrainConfig& config,
                         const std::vector<double>& objective_trace);

}  // namespace verbtensor::learn
