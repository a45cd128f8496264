#pragma once

// Reference implementations written independently of the library code they
// check: plain loops straight from the definitions, no shared helpers.

#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "verbtensor/core/tensor.hpp"
#include "verbtensor/data/dataset.hpp"
#include "verbtensor/learn/tensor_learner.hpp"
#include "verbtensor/util/rng.hpp"

namespace oracle {

using verbtensor::core::DenseMatrix;
using verbtensor::core::DenseVector;
using verbtensor::core::Order3Tensor;
using verbtensor::data::Label;

inline DenseVector random_vector(verbtensor::util::Rng& rng, std::size_t dim, double lo = -1.0, double hi = 1.0) {
  std::vector<double> v(dim);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return DenseVector(std::move(v));
}

inline DenseMatrix random_matrix(verbtensor::util::Rng& rng, std::size_t rows, std::size_t cols) {
  DenseMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rng.uniform(-1.0, 1.0);
  }
  return m;
}

/// z_c = sum_i sum_j T[i][j][c] * s_i * o_j.
inline std::vector<double> contract(const Order3Tensor& t, const DenseVector& s, const DenseVector& o) {
  std::vector<double> z(t.dim_sentence(), 0.0);
  for (std::size_t c = 0; c < t.dim_sentence(); ++c) {
    for (std::size_t i = 0; i < t.dim_subject(); ++i) {
      for (std::size_t j = 0; j < t.dim_object(); ++j) z[c] += t(i, j, c) * s[i] * o[j];
    }
  }
  return z;
}

/// Mean over pairs of the K x K outer product, accumulated element by element.
inline std::vector<std::vector<double>> kronecker_mean(const std::vector<std::pair<DenseVector, DenseVector>>& pairs) {
  const std::size_t ks = pairs.front().first.dim();
  const std::size_t ko = pairs.front().second.dim();
  std::vector<std::vector<double>> m(ks, std::vector<double>(ko, 0.0));
  for (const auto& [s, o] : pairs) {
    for (std::size_t i = 0; i < ks; ++i) {
      for (std::size_t j = 0; j < ko; ++j) m[i][j] += s[i] * o[j];
    }
  }
  for (auto& row : m) {
    for (auto& x : row) x /= static_cast<double>(pairs.size());
  }
  return m;
}

/// Fraction of (positive, negative) pairs ranked correctly, ties worth 1/2.
inline double pair_count_auc(const std::vector<double>& scores, const std::vector<Label>& labels) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != Label::plausible) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != Label::implausible) continue;
      pairs += 1.0;
      if (scores[i] > scores[j]) wins += 1.0;
      if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

/// 5x2cv F statistic laid out as a table: diff[rep][fold].
inline double f_statistic(const std::vector<double>& a, const std::vector<double>& b) {
  double diff[5][2];
  for (int r = 0; r < 5; ++r) {
    for (int f = 0; f < 2; ++f) diff[r][f] = a[r * 2 + f] - b[r * 2 + f];
  }
  double sum_sq = 0.0;
  double sum_var = 0.0;
  for (int r = 0; r < 5; ++r) {
    const double avg = 0.5 * (diff[r][0] + diff[r][1]);
    sum_var += std::pow(diff[r][0] - avg, 2) + std::pow(diff[r][1] - avg, 2);
    sum_sq += std::pow(diff[r][0], 2) + std::pow(diff[r][1], 2);
  }
  return sum_sq / (2.0 * sum_var);
}

/// Co-occurrence count of (noun, context) by enumerating ordered token
/// position pairs (p, q), p != q, per sentence.
inline std::uint64_t cooccurrence(const std::vector<std::string>& sentences, const std::string& noun,
                                  const std::string& context) {
  std::uint64_t total = 0;
  for (const auto& s : sentences) {
    std::istringstream words(s);
    std::vector<std::string> toks;
    for (std::string w; words >> w;) toks.push_back(w);
    for (std::size_t p = 0; p < toks.size(); ++p) {
      for (std::size_t q = 0; q < toks.size(); ++q) {
        if (p != q && toks[p] == noun && toks[q] == context) ++total;
      }
    }
  }
  return total;
}

/// tTest weight of every cell of a dense count table.
inline std::vector<std::vector<double>> ttest(const std::vector<std::vector<double>>& counts) {
  double total = 0.0;
  std::vector<double> row_sum(counts.size(), 0.0);
  std::vector<double> col_sum(counts.front().size(), 0.0);
  for (std::size_t w = 0; w < counts.size(); ++w) {
    for (std::size_t c = 0; c < counts[w].size(); ++c) {
      total += counts[w][c];
      row_sum[w] += counts[w][c];
      col_sum[c] += counts[w][c];
    }
  }
  auto out = counts;
  for (std::size_t w = 0; w < counts.size(); ++w) {
    for (std::size_t c = 0; c < counts[w].size(); ++c) {
      const double pw = row_sum[w] / total;
      const double pc = col_sum[c] / total;
      out[w][c] = pw * pc == 0.0 ? 0.0 : (counts[w][c] / total - pw * pc) / std::sqrt(pw * pc);
    }
  }
  return out;
}

/// Central finite-difference gradient of the regularized objective of one
/// example with respect to every tensor entry then every theta entry.
inline std::vector<double> numeric_gradient(const verbtensor::learn::VerbTensorModel& model,
                                            const verbtensor::learn::Example& example, double lambda, double h,
                                            bool regularize_theta = true) {
  using verbtensor::learn::objective;
  const std::vector<verbtensor::learn::Example> batch{example};
  std::vector<double> grad;
  auto probe = model;
  for (std::size_t i = 0; i < probe.tensor.size(); ++i) {
    const double keep = probe.tensor.values()[i];
    probe.tensor.values()[i] = keep + h;
    const double up = objective(probe, batch, lambda, regularize_theta);
    probe.tensor.values()[i] = keep - h;
    const double down = objective(probe, batch, lambda, regularize_theta);
    probe.tensor.values()[i] = keep;
    grad.push_back((up - down) / (2.0 * h));
  }
  for (std::size_t i = 0; i < probe.theta.values().size(); ++i) {
    const double keep = probe.theta.values()[i];
    probe.theta.values()[i] = keep + h;
    const double up = objective(probe, batch, lambda, regularize_theta);
    probe.theta.values()[i] = keep - h;
    const double down = objective(probe, batch, lambda, regularize_theta);
    probe.theta.values()[i] = keep;
    grad.push_back((up - down) / (2.0 * h));
  }
  return grad;
}

/// Largest |a - n| / max(|a|, |n|, floor) over all coordinates.
inline double max_relative_error(const std::vector<double>& analytic, const std::vector<double>& numeric,
                                 double floor = 1e-6) {
  double worst = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    const double scale = std::max({std::abs(analytic[i]), std::abs(numeric[i]), floor});
    worst = std::max(worst, std::abs(analytic[i] - numeric[i]) / scale);
  }
  return worst;
}

}  // namespace oracle
