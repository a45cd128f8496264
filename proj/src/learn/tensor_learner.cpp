#include "verbtensor/learn/tensor_learner.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>

#include "verbtensor/core/binary_io.hpp"
#include "verbtensor/core/linalg.hpp"
#include "verbtensor/error.hpp"
#include "verbtensor/util/rng.hpp"

namespace verbtensor::learn {

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) throw InvalidArgument("learning_rate must be >= 0");
  if (!(adagrad_epsilon > 0.0)) throw InvalidArgument("adagrad_epsilon must be positive");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidArgument("lambda must be non-negative");
  if (epochs <= 0) throw InvalidArgument("epochs must be positive");
  if (!(init_scale > 0.0)) throw InvalidArgument("init_scale must be positive");
}

VerbTensorModel VerbTensorModel::initialize(std::size_t dim_subject, std::size_t dim_object,
                                            std::size_t dim_sentence, double init_scale, std::uint64_t seed) {
  VerbTensorModel m = zeros(dim_subject, dim_object, dim_sentence);
  util::Rng rng(seed);
  for (double& x : m.tensor.values()) x = rng.uniform(-init_scale, init_scale);
  for (double& x : m.theta.values()) x = rng.uniform(-init_scale, init_scale);
  return m;
}

VerbTensorModel VerbTensorModel::zeros(std::size_t dim_subject, std::size_t dim_object, std::size_t dim_sentence) {
  if (dim_subject == 0 || dim_object == 0 || dim_sentence == 0) throw InvalidArgument("VerbTensorModel: zero dimension");
  return VerbTensorModel{core::Order3Tensor(dim_subject, dim_object, dim_sentence), core::DenseMatrix(2, dim_sentence + 1)};
}

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

struct RawForward {
  std::vector<double> z;
  std::vector<double> a;
  std::array<double, 2> logits{};
  std::array<double, 2> p{};
  double log_norm = 0.0;  // log-sum-exp of logits
};

RawForward raw_forward(const VerbTensorModel& model, std::span<const double> subject, std::span<const double> object) {
  const std::size_t ks = model.dim_subject();
  const std::size_t ko = model.dim_object();
  const std::size_t s = model.dim_sentence();
  if (subject.size() != ks) {
    throw DimensionError("forward: subject axis mismatch (model " + std::to_string(ks) + ", vector " +
                         std::to_string(subject.size()) + ")");
  }
  if (object.size() != ko) {
    throw DimensionError("forward: object axis mismatch (model " + std::to_string(ko) + ", vector " +
                         std::to_string(object.size()) + ")");
  }
  RawForward f;
  f.z.assign(s, 0.0);
  const auto v = model.tensor.values();
  std::size_t idx = 0;
  for (std::size_t i = 0; i < ks; ++i) {
    for (std::size_t j = 0; j < ko; ++j) {
      const double w = subject[i] * object[j];
      for (std::size_t c = 0; c < s; ++c) f.z[c] += w * v[idx++];
    }
  }
  f.a.resize(s);
  for (std::size_t c = 0; c < s; ++c) f.a[c] = sigmoid(f.z[c]);
  for (std::size_t y = 0; y < 2; ++y) {
    double logit = model.theta(y, s);
    for (std::size_t c = 0; c < s; ++c) logit += model.theta(y, c) * f.a[c];
    f.logits[y] = logit;
  }
  const double mx = std::max(f.logits[0], f.logits[1]);
  const double e0 = std::exp(f.logits[0] - mx);
  const double e1 = std::exp(f.logits[1] - mx);
  f.log_norm = mx + std::log(e0 + e1);
  f.p = {e0 / (e0 + e1), e1 / (e0 + e1)};
  return f;
}

std::size_t class_index(data::Label label) {
  return label == data::Label::plausible ? kPlausibleClass : kImplausibleClass;
}

double squared_norm(std::span<const double> xs) {
  double acc = 0.0;
  for (double x : xs) acc += x * x;
  return acc;
}

double raw_objective(const VerbTensorModel& model, std::span<const Example> batch, double lambda, bool regularize_theta) {
  double loss = 0.0;
  for (const auto& ex : batch) {
    const auto f = raw_forward(model, ex.subject.values(), ex.object.values());
    loss += f.log_norm - f.logits[class_index(ex.label)];
  }
  double reg = squared_norm(model.tensor.values());
  if (regularize_theta) reg += squared_norm(model.theta.values());
  return loss + 0.5 * lambda * reg;
}

// Accumulates the data-term gradient of one example into `g`.
void accumulate_data_gradient(const VerbTensorModel& model, const Example& ex, Gradients& g) {
  const std::size_t s = model.dim_sentence();
  const auto f = raw_forward(model, ex.subject.values(), ex.object.values());
  const auto t = ex.label == data::Label::plausible ? std::array<double, 2>{1.0, 0.0} : std::array<double, 2>{0.0, 1.0};
  const std::array<double, 2> dlogit{f.p[0] - t[0], f.p[1] - t[1]};

  std::vector<double> dz(s, 0.0);
  for (std::size_t c = 0; c < s; ++c) {
    double da = 0.0;
    for (std::size_t y = 0; y < 2; ++y) {
      g.theta(y, c) += dlogit[y] * f.a[c];
      da += dlogit[y] * model.theta(y, c);
    }
    dz[c] = da * f.a[c] * (1.0 - f.a[c]);
  }
  for (std::size_t y = 0; y < 2; ++y) g.theta(y, s) += dlogit[y];

  auto gv = g.tensor.values();
  std::size_t idx = 0;
  for (std::size_t i = 0; i < model.dim_subject(); ++i) {
    for (std::size_t j = 0; j < model.dim_object(); ++j) {
      const double w = ex.subject[i] * ex.object[j];
      for (std::size_t c = 0; c < s; ++c) gv[idx++] += dz[c] * w;
    }
  }
}

void add_penalty_gradient(const VerbTensorModel& model, double lambda, bool regularize_theta, Gradients& g) {
  if (lambda == 0.0) return;
  auto gv = g.tensor.values();
  const auto v = model.tensor.values();
  for (std::size_t i = 0; i < v.size(); ++i) gv[i] += lambda * v[i];
  if (regularize_theta) {
    auto gt = g.theta.values();
    const auto th = model.theta.values();
    for (std::size_t i = 0; i < th.size(); ++i) gt[i] += lambda * th[i];
  }
}

Gradients zero_gradients(const VerbTensorModel& model) {
  return Gradients{core::Order3Tensor(model.dim_subject(), model.dim_object(), model.dim_sentence()),
                   core::DenseMatrix(model.theta.rows(), model.theta.cols())};
}

class Adagrad {
 public:
  Adagrad(const VerbTensorModel& model, double rate, double eps)
      : rate_(rate), eps_(eps), tensor_acc_(model.tensor.size(), 0.0), theta_acc_(model.theta.values().size(), 0.0) {}

  void step(VerbTensorModel& model, const Gradients& g) {
    apply(model.tensor.values(), g.tensor.values(), tensor_acc_);
    apply(model.theta.values(), g.theta.values(), theta_acc_);
  }

 private:
  void apply(std::span<double> params, std::span<const double> grads, std::vector<double>& acc) const {
    for (std::size_t i = 0; i < params.size(); ++i) {
      acc[i] += grads[i] * grads[i];
      params[i] -= rate_ * grads[i] / (std::sqrt(acc[i]) + eps_);
    }
  }

  double rate_;
  double eps_;
  std::vector<double> tensor_acc_;
  std::vector<double> theta_acc_;
};

}  // namespace

ForwardTrace forward(const VerbTensorModel& model, const core::DenseVector& subject, const core::DenseVector& object) {
  auto f = raw_forward(model, subject.values(), object.values());
  return ForwardTrace{core::DenseVector(std::move(f.z)), core::DenseVector(std::move(f.a)),
                      core::DenseVector{f.p[0], f.p[1]}};
}

double objective(const VerbTensorModel& model, std::span<const Example> batch, double lambda, bool regularize_theta) {
  if (batch.empty()) throw InvalidArgument("objective: empty batch");
  const double value = raw_objective(model, batch, lambda, regularize_theta);
  if (!std::isfinite(value)) throw DivergenceError("objective: non-finite value (parameters diverged)", -1);
  return value;
}

Gradients gradients(const VerbTensorModel& model, const Example& example, double lambda, bool regularize_theta) {
  Gradients g = zero_gradients(model);
  accumulate_data_gradient(model, example, g);
  add_penalty_gradient(model, lambda, regularize_theta, g);
  return g;
}

TrainResult train(std::span<const Example> examples, const TrainConfig& config) {
  config.validate();
  if (examples.empty()) throw DataError("train: no examples");
  const std::size_t ks = examples.front().subject.dim();
  const std::size_t ko = examples.front().object.dim();
  for (const auto& ex : examples) {
    if (ex.subject.dim() != ks) throw DimensionError("train: inconsistent subject axis across examples");
    if (ex.object.dim() != ko) throw DimensionError("train: inconsistent object axis across examples");
  }

  TrainResult result{VerbTensorModel::initialize(ks, ko, kPlausibilityDims, config.init_scale,
                                                 util::derive_seed(config.seed, "init")),
                     {}};
  auto& model = result.model;
  auto record = [&](int epoch) {
    const double value = raw_objective(model, examples, config.lambda, config.regularize_theta);
    if (!std::isfinite(value)) {
      throw DivergenceError("train: objective became non-finite at epoch " + std::to_string(epoch), epoch);
    }
    result.objective_trace.push_back(value);
  };
  record(0);

  Adagrad optimizer(model, config.learning_rate, config.adagrad_epsilon);
  util::Rng order_rng(util::derive_seed(config.seed, "order"));
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  const double step_lambda = config.lambda / static_cast<double>(examples.size());

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    if (config.mode == UpdateMode::stochastic) {
      order_rng.shuffle(std::span<std::size_t>(order));
      for (std::size_t idx : order) {
        Gradients g = zero_gradients(model);
        accumulate_data_gradient(model, examples[idx], g);
        add_penalty_gradient(model, step_lambda, config.regularize_theta, g);
        optimizer.step(model, g);
      }
    } else {
      Gradients g = zero_gradients(model);
      for (const auto& ex : examples) accumulate_data_gradient(model, ex, g);
      add_penalty_gradient(model, config.lambda, config.regularize_theta, g);
      optimizer.step(model, g);
    }
    record(epoch);
  }
  return result;
}

Prediction predict(const VerbTensorModel& model, const core::DenseVector& subject, const core::DenseVector& object) {
  const auto f = raw_forward(model, subject.values(), object.values());
  const double p = f.p[kPlausibleClass];
  return {p >= 0.5 ? data::Label::plausible : data::Label::implausible, p};
}

void save_model(const std::filesystem::path& path, const VerbTensorModel& model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("save_model: cannot open " + path.string());
  core::write_tensor(out, model.tensor);
  core::write_matrix(out, model.theta);
}

VerbTensorModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("load_model: cannot open " + path.string());
  VerbTensorModel m{core::read_tensor(in), core::read_matrix(in)};
  if (m.theta.rows() != 2 || m.theta.cols() != m.dim_sentence() + 1) {
    throw IoError("load_model: theta block has the wrong shape");
  }
  return m;
}

void write_model_sidecar(const std::filesystem::path& path, const VerbTensorModel& model, const TrainConfig& config,
                         const std::vector<double>& objective_trace) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("write_model_sidecar: cannot open " + path.string());
  auto num = [](double x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
  };
  out << "k_subject = " << model.dim_subject() << '\n'
      << "k_object = " << model.dim_object() << '\n'
      << "s = " << model.dim_sentence() << '\n'
      << "learning_rate = " << num(config.learning_rate) << '\n'
      << "adagrad_epsilon = " << num(config.adagrad_epsilon) << '\n'
      << "lambda = " << num(config.lambda) << '\n'
      << "epochs = " << config.epochs << '\n'
      << "init_scale = " << num(config.init_scale) << '\n'
      << "seed = " << config.seed << '\n'
      << "regularize_theta = " << (config.regularize_theta ? "true" : "false") << '\n'
      << "mode = " << (config.mode == UpdateMode::stochastic ? "stochastic" : "batch") << '\n'
      << "\nepoch,objective\n";
  for (std::size_t e = 0; e < objective_trace.size(); ++e) out << e << ',' << num(objective_trace[e]) << '\n';
  if (!out) throw IoError("write_model_sidecar: write failed");
}

}  // namespace verbtensor::learn
