#include "verbtensor/baseline/kron_baseline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "verbtensor/core/binary_io.hpp"
#include "verbtensor/core/linalg.hpp"
#include "verbtensor/error.hpp"

namespace verbtensor::baseline {

KronBaselineModel train_baseline(std::string verb, std::span<const NounPair> positives) {
  if (positives.empty()) throw DataError("train_baseline: no positive pairs for '" + verb + "'");
  const std::size_t ks = positives.front().subject.dim();
  const std::size_t ko = positives.front().object.dim();
  core::DenseMatrix sum(ks, ko);
  for (const auto& p : positives) {
    if (p.subject.dim() != ks) throw DimensionError("train_baseline: inconsistent subject axis");
    if (p.object.dim() != ko) throw DimensionError("train_baseline: inconsistent object axis");
    for (std::size_t i = 0; i < ks; ++i) {
      for (std::size_t j = 0; j < ko; ++j) sum(i, j) += p.subject[i] * p.object[j];
    }
  }
  const double inv = 1.0 / static_cast<double>(positives.size());
  for (double& x : sum.values()) x *= inv;
  return KronBaselineModel{std::move(verb), std::move(sum), std::nullopt};
}

double score(const KronBaselineModel& model, const core::DenseVector& subject, const core::DenseVector& object) {
  const auto& m = model.avg_matrix;
  if (subject.dim() != m.rows()) throw DimensionError("score: subject axis mismatch");
  if (object.dim() != m.cols()) throw DimensionError("score: object axis mismatch");
  // <s o^T, M>_F / (|s| |o| |M|_F), without materializing s o^T.
  double num = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) row += m(i, j) * object[j];
    num += subject[i] * row;
  }
  const double denom = core::l2_norm(subject.values()) * core::l2_norm(object.values()) * core::frobenius_norm(m);
  if (denom == 0.0) throw InvalidArgument("score: zero vector");
  return std::clamp(num / denom, -1.0, 1.0);
}

double calibrate_cutoff(std::span<const double> positive_scores, std::span<const double> negative_scores) {
  if (positive_scores.empty() || negative_scores.empty()) {
    throw InvalidArgument("calibrate_cutoff: both score lists must be non-empty");
  }
  std::vector<double> all(positive_scores.begin(), positive_scores.end());
  all.insert(all.end(), negative_scores.begin(), negative_scores.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> candidates{-kInf};
  for (std::size_t i = 0; i + 1 < all.size(); ++i) candidates.push_back(0.5 * (all[i] + all[i + 1]));
  candidates.push_back(kInf);

  const auto np = static_cast<double>(positive_scores.size());
  const auto nn = static_cast<double>(negative_scores.size());
  double best_t = kInf;
  double best_gap = kInf;
  for (double t : candidates) {
    const auto fn = std::count_if(positive_scores.begin(), positive_scores.end(), [&](double s) { return s < t; });
    const auto fp = std::count_if(negative_scores.begin(), negative_scores.end(), [&](double s) { return s >= t; });
    const double gap = std::abs(static_cast<double>(fp) / nn - static_cast<double>(fn) / np);
    if (gap <= best_gap) {  // candidates ascend, so <= keeps the higher threshold
      best_gap = gap;
      best_t = t;
    }
  }
  return best_t;
}

void calibrate(KronBaselineModel& model, std::span<const NounPair> positives, std::span<const NounPair> negatives) {
  std::vector<double> ps;
  std::vector<double> ns;
  for (const auto& p : positives) ps.push_back(score(model, p.subject, p.object));
  for (const auto& n : negatives) ns.push_back(score(model, n.subject, n.object));
  model.cutoff = calibrate_cutoff(ps, ns);
}

BaselinePrediction predict_baseline(const KronBaselineModel& model, const core::DenseVector& subject,
                                    const core::DenseVector& object) {
  if (!model.cutoff) throw InvalidArgument("predict_baseline: model '" + model.verb + "' has no calibrated cutoff");
  const double s = score(model, subject, object);
  return {s >= *model.cutoff ? data::Label::plausible : data::Label::implausible, s};
}

void save_baseline(const std::filesystem::path& matrix_path, const std::filesystem::path& sidecar_path,
                   const KronBaselineModel& model, std::size_t n_positives) {
  {
    std::ofstream out(matrix_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("save_baseline: cannot open " + matrix_path.string());
    core::write_matrix(out, model.avg_matrix);
  }
  std::ofstream side(sidecar_path, std::ios::trunc);
  if (!side) throw IoError("save_baseline: cannot open " + sidecar_path.string());
  side << "verb = " << model.verb << '\n' << "k_subject = " << model.avg_matrix.rows() << '\n'
       << "k_object = " << model.avg_matrix.cols() << '\n' << "positives = " << n_positives << '\n';
  if (model.cutoff) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), *model.cutoff);
    side << "cutoff = " << std::string(buf, res.ptr) << '\n';
  }
}

KronBaselineModel load_baseline(const std::filesystem::path& matrix_path, const std::filesystem::path& sidecar_path) {
  KronBaselineModel m;
  {
    std::ifstream in(matrix_path, std::ios::binary);
    if (!in) throw IoError("load_baseline: cannot open " + matrix_path.string());
    m.avg_matrix = core::read_matrix(in);
  }
  std::ifstream side(sidecar_path);
  if (!side) throw IoError("load_baseline: cannot open " + sidecar_path.string());
  std::string line;
  while (std::getline(side, line)) {
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    const auto key = line.substr(0, eq);
    const auto value = line.substr(eq + 3);
    if (key == "verb") m.verb = value;
    if (key == "cutoff") {
      double x = 0.0;
      auto res = std::from_chars(value.data(), value.data() + value.size(), x);
      if (res.ec != std::errc()) throw IoError("load_baseline: bad cutoff '" + value + "'");
      m.cutoff = x;
    }
  }
  return m;
}

}  // namespace verbtensor::baseline
