#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

#include "verbtensor/core/tensor.hpp"

namespace verbtensor::core {

/// Thin singular value decomposition M ~= U * diag(singular_values) * V^T.
/// U is m x k, V is n x k, singular values are non-increasing.
struct SvdResult {
  DenseMatrix U;
  std::vector<double> singular_values;
  DenseMatrix V;

  std::size_t rank() const noexcept { return singular_values.size(); }
  /// U * diag(sigma) * V^T.
  DenseMatrix reconstruct() const;
};

/// Rank-k truncated SVD of a dense matrix by one-sided Jacobi rotations.
/// Requires 1 <= k <= min(rows, cols).
///
/// Sign convention: the entry of largest magnitude in every column of V is
/// positive.
SvdResult truncated_svd(const DenseMatrix& m, std::size_t k);

/// Rank-k truncated SVD of a sparse matrix. Small problems are densified and
/// solved exactly; large ones use randomized subspace iteration with a fixed
/// internal seed, so results are deterministic.
SvdResult truncated_svd(const SparseMatrix& m, std::size_t k);

struct RandomizedSvdOptions {
  std::size_t oversample = 10;
  std::size_t power_iterations = 8;
  std::uint64_t seed = 0x5eedf00dULL;
};

/// Randomized range finder + Jacobi on the projected problem. Exposed for
/// tests; `truncated_svd(SparseMatrix)` decides when to use it.
SvdResult randomized_svd(const SparseMatrix& m, std::size_t k, const RandomizedSvdOptions& options = {});

}  // namespace verbtensor::core
