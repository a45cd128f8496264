#include "verbtensor/core/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "verbtensor/error.hpp"

namespace verbtensor::core {

void require_finite(std::span<const double> values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw InvalidArgument(std::string(what) + ": non-finite value at index " + std::to_string(i));
    }
  }
}

DenseVector::DenseVector(std::size_t dim, double fill) : values_(dim, fill) {
  require_finite(values_, "DenseVector");
}

DenseVector::DenseVector(std::vector<double> values) : values_(std::move(values)) {
  require_finite(values_, "DenseVector");
}

DenseVector::DenseVector(std::initializer_list<double> values) : values_(values) {
  require_finite(values_, "DenseVector");
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {
  require_finite(values_, "DenseMatrix");
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    throw DimensionError("DenseMatrix: expected " + std::to_string(rows_ * cols_) + " values, got " +
                         std::to_string(values_.size()));
  }
  require_finite(values_, "DenseMatrix");
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  values_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("DenseMatrix: ragged initializer (cols axis)");
    values_.insert(values_.end(), r.begin(), r.end());
  }
  require_finite(values_, "DenseMatrix");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

Order3Tensor::Order3Tensor(std::size_t dim_subject, std::size_t dim_object, std::size_t dim_sentence, double fill)
    : dims_{dim_subject, dim_object, dim_sentence}, values_(dim_subject * dim_object * dim_sentence, fill) {
  require_finite(values_, "Order3Tensor");
}

Order3Tensor::Order3Tensor(std::size_t dim_subject, std::size_t dim_object, std::size_t dim_sentence,
                           std::vector<double> values)
    : dims_{dim_subject, dim_object, dim_sentence}, values_(std::move(values)) {
  if (values_.size() != dim_subject * dim_object * dim_sentence) {
    throw DimensionError("Order3Tensor: expected " + std::to_string(dim_subject * dim_object * dim_sentence) +
                         " values, got " + std::to_string(values_.size()));
  }
  require_finite(values_, "Order3Tensor");
}

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows) {}

void SparseMatrix::set_row(std::size_t r, std::vector<SparseEntry> entries) {
  if (r >= rows_) throw DimensionError("SparseMatrix::set_row: row index out of range (rows axis)");
  std::sort(entries.begin(), entries.end(), [](const SparseEntry& a, const SparseEntry& b) { return a.col < b.col; });
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].col >= cols_) throw DimensionError("SparseMatrix::set_row: column index out of range (cols axis)");
    if (i > 0 && entries[i].col == entries[i - 1].col) throw InvalidArgument("SparseMatrix::set_row: duplicate column");
    if (!std::isfinite(entries[i].value)) throw InvalidArgument("SparseMatrix::set_row: non-finite value");
  }
  data_[r] = std::move(entries);
}

std::size_t SparseMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& r : data_) n += r.size();
  return n;
}

DenseMatrix SparseMatrix::to_dense() const {
  DenseMatrix m(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (const auto& e : data_[r]) m(r, e.col) = e.value;
  }
  return m;
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& m) {
  SparseMatrix s(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::vector<SparseEntry> entries;
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (m(r, c) != 0.0) entries.push_back({c, m(r, c)});
    }
    s.data_[r] = std::move(entries);
  }
  return s;
}

}  // namespace verbtensor::core
