#include "verbtensor/core/linalg.hpp"

#include <cmath>
#include <string>

#include "verbtensor/error.hpp"

namespace verbtensor::core {

DenseMatrix kronecker(const DenseVector& u, const DenseVector& v) {
  if (u.dim() == 0 || v.dim() == 0) throw InvalidArgument("kronecker: empty operand");
  DenseMatrix m(u.dim(), v.dim());
  for (std::size_t i = 0; i < u.dim(); ++i) {
    for (std::size_t j = 0; j < v.dim(); ++j) m(i, j) = u[i] * v[j];
  }
  require_finite(m.values(), "kronecker result");
  return m;
}

DenseVector bilinear_contract(const Order3Tensor& tensor, const DenseVector& subject, const DenseVector& object) {
  if (subject.dim() != tensor.dim_subject()) {
    throw DimensionError("bilinear_contract: subject axis mismatch (tensor " + std::to_string(tensor.dim_subject()) +
                         ", vector " + std::to_string(subject.dim()) + ")");
  }
  if (object.dim() != tensor.dim_object()) {
    throw DimensionError("bilinear_contract: object axis mismatch (tensor " + std::to_string(tensor.dim_object()) +
                         ", vector " + std::to_string(object.dim()) + ")");
  }
  const std::size_t ks = tensor.dim_subject();
  const std::size_t ko = tensor.dim_object();
  const std::size_t s = tensor.dim_sentence();
  const auto v = tensor.values();
  std::vector<double> out(s, 0.0);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < ks; ++i) {
    const double si = subject[i];
    for (std::size_t j = 0; j < ko; ++j) {
      const double w = si * object[j];
      for (std::size_t c = 0; c < s; ++c) out[c] += w * v[idx++];
    }
  }
  return DenseVector(std::move(out));
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("dot: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double l2_norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionError("cosine: shape mismatch (" + std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  }
  const double na = l2_norm(a);
  const double nb = l2_norm(b);
  if (na == 0.0 || nb == 0.0) throw InvalidArgument("cosine: zero vector");
  const double c = dot(a, b) / (na * nb);
  return std::fmax(-1.0, std::fmin(1.0, c));
}

DenseMatrix l2_normalize_rows(DenseMatrix m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    const double n = l2_norm(row);
    if (n == 0.0) continue;
    for (double& x : row) x /= n;
  }
  return m;
}

SparseMatrix l2_normalize_rows(const SparseMatrix& m) {
  SparseMatrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    double ss = 0.0;
    for (const auto& e : row) ss += e.value * e.value;
    std::vector<SparseEntry> entries(row.begin(), row.end());
    if (ss > 0.0) {
      const double n = std::sqrt(ss);
      for (auto& e : entries) e.value /= n;
    }
    out.set_row(r, std::move(entries));
  }
  return out;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matmul: inner dimension mismatch");
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

double frobenius_norm(const DenseMatrix& m) { return l2_norm(m.values()); }

double frobenius_distance(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("frobenius_distance: shape mismatch");
  double ss = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    const double d = a.values()[i] - b.values()[i];
    ss += d * d;
  }
  return std::sqrt(ss);
}

}  // namespace verbtensor::core
