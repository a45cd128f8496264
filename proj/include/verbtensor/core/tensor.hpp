#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace verbtensor::core {

/// Throws InvalidArgument if any value is NaN or infinite. `what` names the
/// object being checked.
void require_finite(std::span<const double> values, const char* what);

/// Dense real vector. All constructors reject non-finite values.
class DenseVector {
 public:
  DenseVector() = default;
  explicit DenseVector(std::size_t dim, double fill = 0.0);
  explicit DenseVector(std::vector<double> values);
  DenseVector(std::initializer_list<double> values);

  std::size_t dim() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  bool operator==(const DenseVector&) const = default;

 private:
  std::vector<double> values_;
};

/// Row-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(values_).subspan(r * cols_, cols_);
  }
  std::span<double> row(std::size_t r) { return std::span<double>(values_).subspan(r * cols_, cols_); }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  DenseMatrix transposed() const;

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

/// Order-3 tensor of shape (subject, object, sentence) stored flat in
/// (i, j, c) lexicographic order.
class Order3Tensor {
 public:
  Order3Tensor() = default;
  Order3Tensor(std::size_t dim_subject, std::size_t dim_object, std::size_t dim_sentence, double fill = 0.0);
  Order3Tensor(std::size_t dim_subject, std::size_t dim_object, std::size_t dim_sentence, std::vector<double> values);

  std::size_t dim_subject() const noexcept { return dims_[0]; }
  std::size_t dim_object() const noexcept { return dims_[1]; }
  std::size_t dim_sentence() const noexcept { return dims_[2]; }
  std::array<std::size_t, 3> dims() const noexcept { return dims_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::size_t offset(std::size_t i, std::size_t j, std::size_t c) const noexcept {
    return (i * dims_[1] + j) * dims_[2] + c;
  }
  double operator()(std::size_t i, std::size_t j, std::size_t c) const { return values_[offset(i, j, c)]; }
  double& operator()(std::size_t i, std::size_t j, std::size_t c) { return values_[offset(i, j, c)]; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  bool operator==(const Order3Tensor&) const = default;

 private:
  std::array<std::size_t, 3> dims_{0, 0, 0};
  std::vector<double> values_;
};

struct SparseEntry {
  std::size_t col;
  double value;

  bool operator==(const SparseEntry&) const = default;
};

/// Row-wise sparse matrix. Entries within a row are sorted by column and
/// column indices are unique.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  std::span<const SparseEntry> row(std::size_t r) const { return data_[r]; }
  /// Replaces row `r`. Entries are sorted and validated.
  void set_row(std::size_t r, std::vector<SparseEntry> entries);

  std::size_t nonzeros() const;
  DenseMatrix to_dense() const;
  static SparseMatrix from_dense(const DenseMatrix& m);

  bool operator==(const SparseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::vector<SparseEntry>> data_;
};

}  // namespace verbtensor::core
