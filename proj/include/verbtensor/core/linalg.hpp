#pragma once

#include <span>

#include "verbtensor/core/tensor.hpp"

namespace verbtensor::core {

/// Outer product: result(i, j) = u[i] * v[j].
DenseMatrix kronecker(const DenseVector& u, const DenseVector& v);

/// Contracts the subject and object axes of `tensor`:
/// result[c] = sum_{i,j} subject[i] * tensor(i, j, c) * object[j].
DenseVector bilinear_contract(const Order3Tensor& tensor, const DenseVector& subject, const DenseVector& object);

double dot(std::span<const double> a, std::span<const double> b);
double l2_norm(std::span<const double> a);

/// Cosine similarity of two equally sized value sequences (matrices are
/// compared flattened). Throws InvalidArgument on a zero vector.
double cosine(std::span<const double> a, std::span<const double> b);
inline double cosine(const DenseVector& a, const DenseVector& b) { return cosine(a.values(), b.values()); }
inline double cosine(const DenseMatrix& a, const DenseMatrix& b) { return cosine(a.values(), b.values()); }

/// Scales every nonzero row to unit L2 norm. Zero rows are left unchanged.
DenseMatrix l2_normalize_rows(DenseMatrix m);
SparseMatrix l2_normalize_rows(const SparseMatrix& m);

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
double frobenius_norm(const DenseMatrix& m);
/// Frobenius norm of a - b.
double frobenius_distance(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace verbtensor::core
